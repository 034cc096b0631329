// Batch front end: fixture validation, mode/turbulence exports, controller
// synthesis, and closed-loop simulation.  Exit codes: 0 success, 1 validation
// failure, 2 configuration error, 3 infeasible synthesis, 4 simulation
// failure.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "aoctrl/config.hpp"
#include "aoctrl/csv.hpp"
#include "aoctrl/errors.hpp"
#include "aoctrl/fixtures.hpp"
#include "aoctrl/hinf.hpp"
#include "aoctrl/json_io.hpp"
#include "aoctrl/pipeline.hpp"
#include "aoctrl/sim.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace aoctrl;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitSimulation = 4;

void emit_error(int code, const std::string& message) {
    json j{{"error", {{"code", code}, {"message", message}}}};
    std::cerr << j.dump() << std::endl;
}

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::string fixtures_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> runs;
};

RunConfig resolve_config(const CommonOpts& o) {
    RunConfig cfg;
    if (!o.config_path.empty())
        cfg = load_config(o.config_path);
    if (!o.out_dir.empty())
        cfg.out_dir = o.out_dir;
    if (!o.fixtures_dir.empty())
        cfg.fixtures_dir = o.fixtures_dir;
    if (o.seed)
        cfg.sim.seed = *o.seed;
    if (o.runs)
        cfg.sim.runs = *o.runs;
    cfg.validate();
    return cfg;
}

void write_echo(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    std::ofstream os(fs::path(cfg.out_dir) / "config_echo.json", std::ios::binary);
    os << config_to_json_string(cfg);
}

void print_report(const std::string& name, const FixtureReport& rep) {
    for (const FixtureRowReport& r : rep.rows) {
        std::cout << name << ' ' << r.id << ": "
                  << (r.skipped ? "anomalous-skip" : (r.pass ? "pass" : "FAIL"));
        if (!r.skipped && (r.expected != 0.0 || r.computed != 0.0))
            std::cout << " (computed " << r.computed << ", reference " << r.expected
                      << ", rel " << r.rel_err << ")";
        if (!r.note.empty())
            std::cout << " [" << r.note << "]";
        std::cout << '\n';
    }
}

int cmd_validate_fixtures(const RunConfig& cfg) {
    const fs::path dir(cfg.fixtures_dir);
    const ZernikeFixture zf = load_zernike_fixture((dir / "zernike_modes.json").string());
    const PlateFixture pf = load_plate_fixture((dir / "plate_modes.json").string());
    const TurbulenceFixture tf =
        load_turbulence_fixture((dir / "turbulence_model.json").string());

    const FixtureReport zr = validate_zernike_fixture(zf);
    const FixtureReport pr = validate_plate_fixture(pf, cfg.physical);
    const FixtureReport tr = validate_turbulence_fixture(tf);
    print_report("zernike", zr);
    print_report("plate", pr);
    print_report("turbulence", tr);

    const int failures = zr.failures() + pr.failures() + tr.failures();
    std::cout << (failures == 0 ? "all fixtures consistent" : "fixture mismatches: ")
              << (failures == 0 ? std::string() : std::to_string(failures)) << '\n';
    return failures == 0 ? kExitOk : kExitValidation;
}

int cmd_modes(const RunConfig& cfg) {
    write_echo(cfg);
    const std::vector<PlateShape> shapes = solve_shapes_for_basis(cfg);
    const fs::path out = fs::path(cfg.out_dir) / "modes.csv";
    write_modes_csv(shapes, out.string());
    std::cout << "wrote " << out.string() << " (" << shapes.size() << " shapes)\n";
    return kExitOk;
}

int cmd_turbulence(const RunConfig& cfg) {
    write_echo(cfg);
    RunConfig c = cfg;
    c.v_over_d_discrepancy(std::cerr);
    const TurbulenceModel model =
        build_turbulence_model(cfg.zernike_count, cfg.v_over_d, cfg.d_over_r0);
    const int steps = static_cast<int>(std::llround(cfg.sim.duration / cfg.sim.dt));
    const Eigen::MatrixXd path = sample_path(model, cfg.sim.dt, steps, cfg.sim.seed);
    const fs::path out = fs::path(cfg.out_dir) / "turbulence.csv";
    write_turbulence_csv(path, cfg.sim.dt, 4, out.string());
    std::cout << "wrote " << out.string() << " (" << steps << " samples, "
              << model.size() << " modes)\n";
    return kExitOk;
}

int cmd_synth(const RunConfig& cfg, bool export_plant) {
    write_echo(cfg);
    SynthesisRun run = run_synthesis(cfg, std::cerr);

    const fs::path dir(cfg.out_dir);
    save_controller(run.search.controller, (dir / "controller.json").string());
    if (export_plant)
        save_plant(run.system.plant, (dir / "plant.json").string());

    const HinfController& K = run.search.controller;
    json report{{"gamma", run.search.gamma},
                {"gamma_lower_bound", run.search.gamma_lo},
                {"bisection_steps", run.search.bisection_steps},
                {"certified_closed_loop_norm", run.certified_norm},
                {"rho_pq", K.rho_pq},
                {"conditions",
                 {{"riccati_p",
                   {{"pass", true}, {"residual", K.cert_p.residual_norm}}},
                  {"riccati_q",
                   {{"pass", true}, {"residual", K.cert_q.residual_norm}}},
                  {"coupling",
                   {{"pass", K.rho_pq < run.search.gamma * run.search.gamma},
                    {"rho_pq", K.rho_pq}}}}},
                {"controller_order", K.order()}};
    std::ofstream os(dir / "synth_report.json", std::ios::binary);
    os << report.dump(2) << '\n';

    std::cout << "gamma = " << run.search.gamma
              << ", certified closed-loop norm = " << run.certified_norm << '\n'
              << "wrote " << (dir / "controller.json").string() << '\n';
    if (export_plant)
        std::cout << "wrote " << (dir / "plant.json").string() << '\n';
    return kExitOk;
}

int cmd_simulate(const RunConfig& cfg, const std::string& controller_file,
                 bool no_control, bool aggregate_only) {
    write_echo(cfg);
    const AoSystem sys = build_system(cfg);

    HinfController K = no_control ? no_controller(sys.plant) : HinfController{};
    if (!no_control) {
        std::string path = controller_file;
        if (path.empty())
            path = (fs::path(cfg.out_dir) / "controller.json").string();
        K = load_controller(path);
        if (K.N.cols() != sys.plant.dims.n_y || K.L.rows() != sys.plant.dims.n_u)
            throw ConfigError("controller dimensions do not match the configured plant");
    }

    const fs::path dir(cfg.out_dir);
    if (cfg.sim.runs <= 1 && !aggregate_only) {
        const SimResult r = run_closed_loop(sys.plant, K, sys.turbulence, cfg.sim.dt,
                                            cfg.sim.duration, cfg.sim.seed,
                                            cfg.sim.burn_in);
        write_sim_csv(r, (dir / "sim.csv").string());
        json summary{{"attenuation_ratio", r.attenuation_ratio},
                     {"seed", r.seed},
                     {"samples", r.t.size()},
                     {"no_control", no_control}};
        std::ofstream os(dir / "sim_summary.json", std::ios::binary);
        os << summary.dump(2) << '\n';
        std::cout << "attenuation ratio = " << r.attenuation_ratio << '\n'
                  << "wrote " << (dir / "sim.csv").string() << '\n';
        return kExitOk;
    }

    const MonteCarloResult mc =
        monte_carlo(sys.plant, K, sys.turbulence, cfg.sim.runs, cfg.sim.dt,
                    cfg.sim.duration, cfg.sim.seed, cfg.sim.burn_in);
    if (!mc.failures.empty()) {
        for (const std::string& f : mc.failures)
            std::cerr << "run failed: " << f << '\n';
        if (mc.ratios.empty())
            throw NumericalError("all monte-carlo runs failed");
    }

    // the first run's traces provide the plot-ready series
    const SimResult first = run_closed_loop(sys.plant, K, sys.turbulence, cfg.sim.dt,
                                            cfg.sim.duration, cfg.sim.seed,
                                            cfg.sim.burn_in);
    write_sim_csv(first, (dir / "sim.csv").string());

    json per_run = json::array();
    for (std::size_t i = 0; i < mc.ratios.size(); ++i)
        per_run.push_back({{"seed", mc.seeds[i]}, {"ratio", mc.ratios[i]}});
    json summary{{"mean_ratio", mc.mean_ratio},
                 {"stderr", mc.stderr_ratio},
                 {"runs", mc.ratios.size()},
                 {"failed_runs", mc.failures.size()},
                 {"per_run", std::move(per_run)},
                 {"no_control", no_control}};
    std::ofstream os(dir / "montecarlo_summary.json", std::ios::binary);
    os << summary.dump(2) << '\n';
    std::cout << "mean attenuation ratio = " << mc.mean_ratio << " +- "
              << mc.stderr_ratio << " over " << mc.ratios.size() << " runs\n"
              << "wrote " << (dir / "montecarlo_summary.json").string() << '\n';
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive-optics control loop: modes, turbulence, synthesis, simulation"};
    app.require_subcommand(1);

    CommonOpts opts;
    app.add_option("--config", opts.config_path, "configuration json");
    app.add_option("--out", opts.out_dir, "output directory");
    app.add_option("--fixtures", opts.fixtures_dir, "fixture directory");
    std::uint64_t seed_val = 0;
    int runs_val = 0;
    auto* seed_opt = app.add_option("--seed", seed_val, "simulation base seed");
    auto* runs_opt = app.add_option("--runs", runs_val, "monte-carlo run count");

    auto* validate = app.add_subcommand("validate-fixtures",
                                        "recompute the reference tables");
    validate->fallthrough();
    auto* modes = app.add_subcommand("modes", "solve plate shapes, write csv");
    modes->fallthrough();
    auto* turb = app.add_subcommand("turbulence", "sample a turbulence path, write csv");
    turb->fallthrough();
    auto* synth = app.add_subcommand("synth", "synthesize the output-feedback controller");
    synth->fallthrough();
    bool export_plant = false;
    synth->add_flag("--export-plant", export_plant, "also write the plant json");
    auto* simulate = app.add_subcommand("simulate", "closed-loop simulation");
    simulate->fallthrough();
    std::string controller_file;
    bool no_control = false;
    simulate->add_option("--controller", controller_file, "controller json path");
    simulate->add_flag("--no-control", no_control, "open-loop baseline");
    auto* montecarlo = app.add_subcommand("montecarlo", "aggregate many runs");
    montecarlo->fallthrough();
    std::string mc_controller_file;
    bool mc_no_control = false;
    montecarlo->add_option("--controller", mc_controller_file, "controller json path");
    montecarlo->add_flag("--no-control", mc_no_control, "open-loop baseline");

    CLI11_PARSE(app, argc, argv);
    if (seed_opt->count() > 0)
        opts.seed = seed_val;
    if (runs_opt->count() > 0)
        opts.runs = runs_val;

    try {
        const RunConfig cfg = resolve_config(opts);
        if (validate->parsed())
            return cmd_validate_fixtures(cfg);
        if (modes->parsed())
            return cmd_modes(cfg);
        if (turb->parsed())
            return cmd_turbulence(cfg);
        if (synth->parsed())
            return cmd_synth(cfg, export_plant);
        if (simulate->parsed())
            return cmd_simulate(cfg, controller_file, no_control, false);
        if (montecarlo->parsed())
            return cmd_simulate(cfg, mc_controller_file, mc_no_control, true);
        emit_error(kExitConfig, "no subcommand");
        return kExitConfig;
    } catch (const ConfigError& e) {
        emit_error(kExitConfig, e.what());
        return kExitConfig;
    } catch (const NumericalError& e) {
        const std::string what = e.what();
        const bool infeasible = what.find("infeasible") != std::string::npos;
        emit_error(infeasible ? kExitInfeasible : kExitSimulation, what);
        return infeasible ? kExitInfeasible : kExitSimulation;
    } catch (const std::exception& e) {
        emit_error(kExitSimulation, e.what());
        return kExitSimulation;
    }
}

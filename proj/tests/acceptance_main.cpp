// Acceptance suite: one line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "aoctrl/config.hpp"
#include "aoctrl/csv.hpp"
#include "aoctrl/errors.hpp"
#include "aoctrl/fixtures.hpp"
#include "aoctrl/hinf.hpp"
#include "aoctrl/pipeline.hpp"
#include "aoctrl/quadrature.hpp"
#include "aoctrl/riccati.hpp"
#include "aoctrl/sim.hpp"
#include "testutil.hpp"

namespace fs = std::filesystem;
using namespace aoctrl;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

const std::string kFixtures = std::string(AOCTRL_SOURCE_DIR) + "/data/fixtures";

const AoSystem& default_system() {
    static const AoSystem sys = build_system(RunConfig{});
    return sys;
}

const GammaSearchResult& default_search() {
    static const GammaSearchResult res = [] {
        RunConfig cfg;
        return gamma_bisect(default_system().plant, cfg.gamma.lo, cfg.gamma.hi,
                            cfg.gamma.tol, cfg.gamma.cap);
    }();
    return res;
}

Outcome criterion_drift_fixture() {
    const TurbulenceFixture fx =
        load_turbulence_fixture(kFixtures + "/turbulence_model.json");
    const Eigen::MatrixXd F = build_F(zernike_modes(4, 15), fx.v_over_d);
    int checked = 0, skipped = 0;
    double worst = 0.0;
    for (const TurbulenceFixtureRow& row : fx.rows) {
        const bool anomalous =
            std::find(row.flags.begin(), row.flags.end(), "anomalous") != row.flags.end();
        if (anomalous) {
            ++skipped;
            continue;
        }
        const double got = F(row.row - 1, row.row - 1);
        worst = std::max(worst, std::abs(got - row.f) / std::abs(row.f));
        ++checked;
    }
    Outcome o;
    o.pass = (checked == 10 && skipped == 2 && worst <= 1e-3);
    std::ostringstream os;
    os << checked << " rows within " << worst << " rel, " << skipped
       << " anomalous rows skipped";
    o.detail = os.str();
    return o;
}

Outcome criterion_lyapunov() {
    const TurbulenceModel& m = default_system().turbulence;
    const double res =
        (m.F * m.P_inf + m.P_inf * m.F.transpose() + m.G * m.G.transpose()).norm();
    Outcome o;
    o.pass = res <= 1e-10 * m.P_inf.norm();
    std::ostringstream os;
    os << "residual " << res / m.P_inf.norm() << " (relative Frobenius)";
    o.detail = os.str();
    return o;
}

Outcome criterion_plate_fixture() {
    const PlateFixture fx = load_plate_fixture(kFixtures + "/plate_modes.json");
    const FixtureReport rep = validate_plate_fixture(fx, PhysicalParams{});
    Outcome o;
    o.pass = rep.all_pass();
    double worst = 0.0;
    for (const FixtureRowReport& r : rep.rows)
        if (!r.skipped && r.id.rfind("boundary", 0) != 0)
            worst = std::max(worst, r.rel_err);
    std::ostringstream os;
    os << "10 rows paired by nearest lambda, worst rel err " << worst;
    if (!o.pass)
        os << ", " << rep.failures() << " failures";
    o.detail = os.str();
    return o;
}

Outcome criterion_riccati() {
    Outcome o;
    // scalar analytic case
    Eigen::MatrixXd a(1, 1), z(1, 1), b(1, 1), c(1, 1);
    a << -1.0;
    z << 0.0;
    b << 1.0;
    c << 1.0;
    const RiccatiOutcome scalar = solve_game_riccati(a, z, b, c, 2.0);
    if (!scalar.feasible() ||
        std::abs(scalar.certificate->P(0, 0) - (std::sqrt(2.0) - 1.0)) > 1e-10) {
        o.detail = "scalar analytic case failed";
        return o;
    }

    std::mt19937_64 rng(424242);
    std::normal_distribution<double> g;
    auto rand_mat = [&](int r, int cc) {
        Eigen::MatrixXd m(r, cc);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < cc; ++j)
                m(i, j) = g(rng);
        return m;
    };
    int accepted = 0;
    double worst_res = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 11);
        const Eigen::MatrixXd A = rand_mat(n, n);
        const Eigen::MatrixXd B1 = rand_mat(n, std::max(1, n / 2));
        const Eigen::MatrixXd B2 = rand_mat(n, std::max(1, n / 3));
        const Eigen::MatrixXd C1 = rand_mat(std::max(1, n / 2), n);
        if (!stabilizable(A, B2) || !detectable(C1, A))
            continue;
        double gamma = 4.0 * (1.0 + B1.norm());
        RiccatiOutcome out;
        for (int tries = 0; tries < 10; ++tries) {
            out = solve_game_riccati(A, B1, B2, C1, gamma);
            if (out.feasible())
                break;
            gamma *= 2.0;
        }
        if (!out.feasible()) {
            o.detail = "random plant became infeasible at large gamma";
            return o;
        }
        if (!out.certificate->stable ||
            spectral_abscissa(out.certificate->closed_matrix) >= 0.0) {
            o.detail = "accepted solve not stabilizing";
            return o;
        }
        worst_res = std::max(worst_res, out.certificate->residual_norm);
        ++accepted;
    }
    o.pass = (worst_res <= 1e-8 && accepted >= 90);
    std::ostringstream os;
    os << accepted << " random plants accepted, worst residual " << worst_res
       << ", scalar case at 1e-10";
    o.detail = os.str();
    return o;
}

Outcome criterion_gamma_oracle() {
    // analytic optimum of the scalar plant a=1, b1=b2=c1=c2=1
    auto feasible = [](double gm) {
        if (gm <= 1.0)
            return false;
        const double p =
            (1.0 + std::sqrt(2.0 - 1.0 / (gm * gm))) / (1.0 - 1.0 / (gm * gm));
        return p < gm;
    };
    double lo = 1.5, hi = 10.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? hi : lo) = mid;
    }
    const double oracle = hi;

    const StandardPlant plant = testutil::scalar_plant(1.0, 1.0, 1.0, 1.0, 1.0);
    const GammaSearchResult res = gamma_bisect(plant, 0.1, 1.5, 1e-4, 1e6);
    Outcome o;
    o.pass = std::abs(res.gamma - oracle) <= 1e-3 * oracle;
    std::ostringstream os;
    os << "bisection " << res.gamma << " vs analytic " << oracle << " (rel "
       << std::abs(res.gamma - oracle) / oracle << ")";
    o.detail = os.str();
    return o;
}

Outcome criterion_certified_norm() {
    const GammaSearchResult& res = default_search();
    const double nrm = closed_loop_hinf_norm(default_system().plant, res.controller, 1e-6);
    const bool certified =
        closed_loop_gain_below(default_system().plant, res.controller, res.gamma);
    Outcome o;
    o.pass = certified && nrm <= res.gamma * (1.0 + 2e-6);
    std::ostringstream os;
    os << "independent norm " << nrm << " (estimator tol 1e-6), gamma "
       << res.gamma << ", bounded-real certificate at gamma "
       << (certified ? "holds" : "FAILS");
    o.detail = os.str();
    return o;
}

Outcome criterion_headline_ratio() {
    RunConfig cfg;
    const AoSystem& sys = default_system();
    const MonteCarloResult mc =
        monte_carlo(sys.plant, default_search().controller, sys.turbulence,
                    std::max(50, cfg.sim.runs), cfg.sim.dt, cfg.sim.duration,
                    cfg.sim.seed, cfg.sim.burn_in);
    Outcome o;
    o.pass = mc.failures.empty() && mc.mean_ratio >= 1.5 && mc.mean_ratio <= 2.3;
    std::ostringstream os;
    os << "mean attenuation ratio " << mc.mean_ratio << " +- " << mc.stderr_ratio
       << " over " << mc.ratios.size() << " runs; required band [1.5, 2.3]";
    o.detail = os.str();
    return o;
}

Outcome criterion_sim_vs_analytic() {
    RunConfig cfg;
    const AoSystem& sys = default_system();
    const HinfController& K = default_search().controller;
    const SteadyStateVariance v = steady_state_variance(sys.plant, K);

    const int runs = 12;
    std::vector<double> ms_tur(runs), ms_res(runs);
    for (int r = 0; r < runs; ++r) {
        const SimResult s =
            run_closed_loop(sys.plant, K, sys.turbulence, cfg.sim.dt,
                            cfg.sim.duration, cfg.sim.seed + 100 + r, cfg.sim.burn_in);
        double t = 0.0, q = 0.0;
        for (Eigen::Index k = 0; k < s.t.size(); ++k) {
            t += s.phi_tur_norm(k) * s.phi_tur_norm(k);
            q += s.phi_res_norm(k) * s.phi_res_norm(k);
        }
        ms_tur[static_cast<std::size_t>(r)] = t / s.t.size();
        ms_res[static_cast<std::size_t>(r)] = q / s.t.size();
    }
    auto mean_stderr = [](const std::vector<double>& x) {
        double m = 0.0;
        for (double v2 : x)
            m += v2;
        m /= x.size();
        double var = 0.0;
        for (double v2 : x)
            var += (v2 - m) * (v2 - m);
        var /= (x.size() - 1);
        return std::pair<double, double>(m, std::sqrt(var / x.size()));
    };
    const auto [mt, st] = mean_stderr(ms_tur);
    const auto [mr, sr] = mean_stderr(ms_res);
    Outcome o;
    o.pass = std::abs(mt - v.mean_sq_phi_tur) <= 3.0 * st &&
             std::abs(mr - v.mean_sq_phi_res) <= 3.0 * sr;
    std::ostringstream os;
    os << "E||tur||^2 sim " << mt << " vs analytic " << v.mean_sq_phi_tur
       << " (3se " << 3 * st << "); E||res||^2 sim " << mr << " vs "
       << v.mean_sq_phi_res << " (3se " << 3 * sr << ")";
    o.detail = os.str();
    return o;
}

Outcome criterion_zernike_suite() {
    Outcome o;
    // orthonormality at 1e-8 with the stated quadrature
    const QuadratureRule rad = gauss_legendre(64);
    const int ntheta = 256;
    double worst = 0.0;
    for (int i = 1; i <= 15; ++i) {
        for (int j = i; j <= 15; ++j) {
            double acc = 0.0;
            for (Eigen::Index q = 0; q < rad.nodes.size(); ++q) {
                double ang = 0.0;
                for (int t = 0; t < ntheta; ++t) {
                    const double theta = 2.0 * M_PI * t / ntheta;
                    ang += zernike_eval(noll_indices(i), rad.nodes(q), theta, 1.0) *
                           zernike_eval(noll_indices(j), rad.nodes(q), theta, 1.0);
                }
                acc += rad.weights(q) * rad.nodes(q) * ang * (2.0 * M_PI / ntheta);
            }
            acc /= M_PI;
            worst = std::max(worst, std::abs(acc - ((i == j) ? 1.0 : 0.0)));
        }
    }
    if (worst > 1e-8) {
        o.detail = "orthonormality deviation " + std::to_string(worst);
        return o;
    }

    const Eigen::MatrixXd P8 = noll_covariance_matrix(4, 15, 8.0);
    const Eigen::MatrixXd P1 = noll_covariance_matrix(4, 15, 1.0);
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j)
            if (P8(i, j) != P8(j, i)) {
                o.detail = "covariance not exactly symmetric";
                return o;
            }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(P8);
    if (eig.eigenvalues().minCoeff() < -1e-12 * P8.trace()) {
        o.detail = "covariance not PSD";
        return o;
    }
    const double scale_err =
        (P8 - std::pow(8.0, 5.0 / 3.0) * P1).cwiseAbs().maxCoeff() /
        P8.cwiseAbs().maxCoeff();
    if (scale_err > 1e-13) {
        o.detail = "5/3 scaling violated: " + std::to_string(scale_err);
        return o;
    }
    o.pass = true;
    std::ostringstream os;
    os << "orthonormality " << worst << ", symmetry exact, PSD, scaling "
       << scale_err;
    o.detail = os.str();
    return o;
}

Outcome criterion_determinism() {
    const fs::path base = fs::path(AOCTRL_BINARY_DIR) / "acceptance_determinism";
    fs::remove_all(base);
    fs::create_directories(base);

    RunConfig cfg;
    cfg.sim.duration = 0.3;
    cfg.sim.runs = 1;
    cfg.sim.seed = 7;
    cfg.out_dir = (base / "synth").string();
    cfg.fixtures_dir = kFixtures;
    save_config(cfg, (base / "config.json").string());

    auto run = [&](const std::string& args) {
        const std::string cmd = std::string(AOCTRL_CLI_PATH) + " " + args;
        return std::system(cmd.c_str());
    };
    Outcome o;
    if (run("--config " + (base / "config.json").string() + " synth --out " +
            (base / "synth").string() + " > /dev/null") != 0) {
        o.detail = "synthesis command failed";
        return o;
    }
    const std::string controller = (base / "synth" / "controller.json").string();
    for (const char* sub : {"runA", "runB"}) {
        if (run("--config " + (base / "config.json").string() + " --seed 7 " +
                "simulate --controller " + controller + " --out " +
                (base / sub).string() + " > /dev/null") != 0) {
            o.detail = "simulate command failed";
            return o;
        }
    }
    auto slurp = [](const fs::path& p) {
        std::ifstream is(p, std::ios::binary);
        std::ostringstream ss;
        ss << is.rdbuf();
        return ss.str();
    };
    const std::string a = slurp(base / "runA" / "sim.csv");
    const std::string b = slurp(base / "runB" / "sim.csv");
    o.pass = !a.empty() && a == b;
    std::ostringstream os;
    os << "csv bytes " << a.size() << (o.pass ? " identical" : " DIFFER")
       << " across two invocations";
    o.detail = os.str();
    return o;
}

} // namespace

int main() {
    struct Entry {
        int id;
        const char* name;
        std::function<Outcome()> fn;
    };
    const std::vector<Entry> criteria = {
        {1, "turbulence drift fixture", criterion_drift_fixture},
        {2, "stationary Lyapunov consistency", criterion_lyapunov},
        {3, "plate-mode fixture", criterion_plate_fixture},
        {4, "riccati certification", criterion_riccati},
        {5, "gamma-optimality oracle", criterion_gamma_oracle},
        {6, "certified closed-loop norm", criterion_certified_norm},
        {7, "headline attenuation band", criterion_headline_ratio},
        {8, "simulation vs analytic moments", criterion_sim_vs_analytic},
        {9, "zernike suite", criterion_zernike_suite},
        {10, "csv determinism", criterion_determinism},
    };

    int failures = 0;
    for (const Entry& e : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = e.fn();
        } catch (const std::exception& ex) {
            o.pass = false;
            o.detail = std::string("exception: ") + ex.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        std::printf("criterion %2d: %s  %-34s %s (%.2f s)\n", e.id,
                    o.pass ? "PASS" : "FAIL", e.name, o.detail.c_str(), secs);
        std::fflush(stdout);
        if (!o.pass)
            ++failures;
    }
    if (failures > 0)
        std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    else
        std::printf("all %zu criteria passed\n", criteria.size());
    return failures;
}

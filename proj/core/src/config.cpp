#include "aoctrl/config.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "aoctrl/errors.hpp"

namespace aoctrl {

using nlohmann::json;

void RunConfig::validate() const {
    physical.validate();
    if (zernike_count < 4 || zernike_count > 15)
        throw ConfigError("zernike_count must lie in [4, 15]");
    if (basis_count < 1)
        throw ConfigError("basis_count must be >= 1");
    if (k_max < 0 || k_max > 12)
        throw ConfigError("k_max must lie in [0, 12]");
    if (!(v_over_d > 0.0))
        throw ConfigError("v_over_d must be positive");
    if (!(d_over_r0 > 0.0))
        throw ConfigError("d_over_r0 must be positive");
    if (!(gamma.lo >= 0.0) || !(gamma.hi > gamma.lo))
        throw ConfigError("gamma bounds must satisfy 0 <= lo < hi");
    if (!(gamma.tol > 0.0) || !(gamma.cap >= gamma.hi))
        throw ConfigError("gamma tol must be positive and cap >= hi");
    if (!(sim.dt > 0.0) || !(sim.duration > sim.burn_in) || !(sim.burn_in >= 0.0))
        throw ConfigError("sim timing must satisfy dt > 0 and 0 <= burn_in < duration");
    if (sim.runs < 1)
        throw ConfigError("sim.runs must be >= 1");
}

bool RunConfig::v_over_d_discrepancy(std::ostream& log) const {
    const double table_ratio = physical.wind_speed / physical.pupil_diameter;
    if (std::abs(table_ratio - v_over_d) <= 1e-9 * table_ratio)
        return false;
    log << "note: wind_speed/pupil_diameter = " << table_ratio
        << " s^-1 but v_over_d = " << v_over_d
        << " s^-1; the drift fixture corresponds to the latter\n";
    return true;
}

namespace {

json gamma_to_json(const GammaSearchConfig& g) {
    return json{{"lo", g.lo}, {"hi", g.hi}, {"tol", g.tol}, {"cap", g.cap}};
}

json sim_to_json(const SimConfig& s) {
    return json{{"dt", s.dt},
                {"duration", s.duration},
                {"burn_in", s.burn_in},
                {"runs", s.runs},
                {"seed", s.seed}};
}

json physical_to_json(const PhysicalParams& p) {
    return json{{"rho", p.rho},
                {"q1", p.q1},
                {"q2", p.q2},
                {"nu", p.nu},
                {"radius", p.radius},
                {"d31", p.d31},
                {"e31", p.e31},
                {"wavelength", p.wavelength},
                {"wind_speed", p.wind_speed},
                {"pupil_diameter", p.pupil_diameter},
                {"b_weight", p.b_weight},
                {"c_weight", p.c_weight},
                {"d_weight", p.d_weight}};
}

template <typename T>
void maybe(const json& j, const char* key, T& into) {
    if (j.contains(key))
        into = j.at(key).get<T>();
}

} // namespace

std::string config_to_json_string(const RunConfig& cfg) {
    json j{{"version", kConfigSchemaVersion},
           {"physical", physical_to_json(cfg.physical)},
           {"zernike_count", cfg.zernike_count},
           {"basis_count", cfg.basis_count},
           {"k_max", cfg.k_max},
           {"v_over_d", cfg.v_over_d},
           {"d_over_r0", cfg.d_over_r0},
           {"gamma", gamma_to_json(cfg.gamma)},
           {"sim", sim_to_json(cfg.sim)},
           {"out_dir", cfg.out_dir},
           {"fixtures_dir", cfg.fixtures_dir}};
    return j.dump(2) + "\n";
}

void save_config(const RunConfig& cfg, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw ConfigError("cannot open for writing: " + path);
    os << config_to_json_string(cfg);
}

RunConfig load_config(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw ConfigError("cannot open config: " + path);
    json j;
    try {
        j = json::parse(is);
    } catch (const json::parse_error& e) {
        throw ConfigError("malformed config json: " + std::string(e.what()));
    }
    if (j.contains("version") && j.at("version").get<int>() != kConfigSchemaVersion)
        throw ConfigError("unsupported config schema version");

    RunConfig cfg;
    if (j.contains("physical")) {
        const json& p = j.at("physical");
        maybe(p, "rho", cfg.physical.rho);
        maybe(p, "q1", cfg.physical.q1);
        maybe(p, "q2", cfg.physical.q2);
        maybe(p, "nu", cfg.physical.nu);
        maybe(p, "radius", cfg.physical.radius);
        maybe(p, "d31", cfg.physical.d31);
        maybe(p, "e31", cfg.physical.e31);
        maybe(p, "wavelength", cfg.physical.wavelength);
        maybe(p, "wind_speed", cfg.physical.wind_speed);
        maybe(p, "pupil_diameter", cfg.physical.pupil_diameter);
        maybe(p, "b_weight", cfg.physical.b_weight);
        maybe(p, "c_weight", cfg.physical.c_weight);
        maybe(p, "d_weight", cfg.physical.d_weight);
    }
    maybe(j, "zernike_count", cfg.zernike_count);
    maybe(j, "basis_count", cfg.basis_count);
    maybe(j, "k_max", cfg.k_max);
    maybe(j, "v_over_d", cfg.v_over_d);
    maybe(j, "d_over_r0", cfg.d_over_r0);
    if (j.contains("gamma")) {
        const json& g = j.at("gamma");
        maybe(g, "lo", cfg.gamma.lo);
        maybe(g, "hi", cfg.gamma.hi);
        maybe(g, "tol", cfg.gamma.tol);
        maybe(g, "cap", cfg.gamma.cap);
    }
    if (j.contains("sim")) {
        const json& s = j.at("sim");
        maybe(s, "dt", cfg.sim.dt);
        maybe(s, "duration", cfg.sim.duration);
        maybe(s, "burn_in", cfg.sim.burn_in);
        maybe(s, "runs", cfg.sim.runs);
        maybe(s, "seed", cfg.sim.seed);
    }
    maybe(j, "out_dir", cfg.out_dir);
    maybe(j, "fixtures_dir", cfg.fixtures_dir);
    cfg.validate();
    return cfg;
}

} // namespace aoctrl

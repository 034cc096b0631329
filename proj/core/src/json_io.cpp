#include "aoctrl/json_io.hpp"

#include <fstream>

#include <json.hpp>

#include "aoctrl/errors.hpp"

namespace aoctrl {

using nlohmann::json;

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            arr.push_back(m(i, j));
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(arr)}};
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
    const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
    const auto& data = j.at("data");
    if (static_cast<Eigen::Index>(data.size()) != rows * cols)
        throw ConfigError("matrix json: data length does not match rows*cols");
    Eigen::MatrixXd m(rows, cols);
    Eigen::Index idx = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j2 = 0; j2 < cols; ++j2)
            m(i, j2) = data[static_cast<std::size_t>(idx++)].get<double>();
    return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        arr.push_back(v(i));
    return arr;
}

Eigen::VectorXd vector_from_json(const json& j) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    return v;
}

json params_to_json(const PhysicalParams& p) {
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

PhysicalParams params_from_json(const json& j) {
    PhysicalParams p;
    p.rho = j.at("rho");
    p.q1 = j.at("q1");
    p.q2 = j.at("q2");
    p.nu = j.at("nu");
    p.radius = j.at("radius");
    p.d31 = j.at("d31");
    p.e31 = j.at("e31");
    p.wavelength = j.at("wavelength");
    p.wind_speed = j.value("wind_speed", 9.0);
    p.pupil_diameter = j.value("pupil_diameter", 1e-2);
    p.b_weight = j.at("b_weight");
    p.c_weight = j.at("c_weight");
    p.d_weight = j.at("d_weight");
    return p;
}

void dump_to_file(const json& j, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw ConfigError("cannot open for writing: " + path);
    os << j.dump(2) << '\n';
}

json parse_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw ConfigError("cannot open: " + path);
    try {
        return json::parse(is);
    } catch (const json::parse_error& e) {
        throw ConfigError("malformed json in " + path + ": " + e.what());
    }
}

} // namespace

std::string plant_to_json_string(const StandardPlant& p) {
    json j{{"version", 1},
           {"dims",
            {{"n_basis", p.dims.n_basis},
             {"n_zernike", p.dims.n_zernike},
             {"n_x", p.dims.n_x},
             {"n_w", p.dims.n_w},
             {"n_u", p.dims.n_u},
             {"n_z", p.dims.n_z},
             {"n_y", p.dims.n_y}}},
           {"matrices",
            {{"A", matrix_to_json(p.A)},
             {"B1", matrix_to_json(p.B1)},
             {"B2", matrix_to_json(p.B2)},
             {"C1", matrix_to_json(p.C1)},
             {"D12", matrix_to_json(p.D12)},
             {"C2", matrix_to_json(p.C2)},
             {"D21", matrix_to_json(p.D21)}}},
           {"projection", matrix_to_json(p.projection)},
           {"gram", matrix_to_json(p.gram)},
           {"omega_sq", vector_to_json(p.omega_sq)},
           {"state_scaling", vector_to_json(p.state_scaling)},
           {"params", params_to_json(p.params)}};
    return j.dump(2) + "\n";
}

void save_plant(const StandardPlant& p, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw ConfigError("cannot open for writing: " + path);
    os << plant_to_json_string(p);
}

StandardPlant load_plant(const std::string& path) {
    const json j = parse_file(path);
    StandardPlant p;
    const json& d = j.at("dims");
    p.dims.n_basis = d.at("n_basis");
    p.dims.n_zernike = d.at("n_zernike");
    p.dims.n_x = d.at("n_x");
    p.dims.n_w = d.at("n_w");
    p.dims.n_u = d.at("n_u");
    p.dims.n_z = d.at("n_z");
    p.dims.n_y = d.at("n_y");
    const json& m = j.at("matrices");
    p.A = matrix_from_json(m.at("A"));
    p.B1 = matrix_from_json(m.at("B1"));
    p.B2 = matrix_from_json(m.at("B2"));
    p.C1 = matrix_from_json(m.at("C1"));
    p.D12 = matrix_from_json(m.at("D12"));
    p.C2 = matrix_from_json(m.at("C2"));
    p.D21 = matrix_from_json(m.at("D21"));
    p.projection = matrix_from_json(j.at("projection"));
    p.gram = matrix_from_json(j.at("gram"));
    p.omega_sq = vector_from_json(j.at("omega_sq"));
    p.state_scaling = vector_from_json(j.at("state_scaling"));
    p.params = params_from_json(j.at("params"));
    if (p.A.rows() != p.dims.n_x || p.B1.cols() != p.dims.n_w ||
        p.B2.cols() != p.dims.n_u || p.C1.rows() != p.dims.n_z ||
        p.C2.rows() != p.dims.n_y)
        throw ConfigError("plant json: dims do not match matrices");
    return p;
}

void save_controller(const HinfController& K, const std::string& path) {
    json j{{"version", 1},
           {"gamma", K.gamma},
           {"M", matrix_to_json(K.M)},
           {"N", matrix_to_json(K.N)},
           {"L", matrix_to_json(K.L)},
           {"R", matrix_to_json(K.R)},
           {"residuals",
            {{"riccati_p", K.cert_p.residual_norm},
             {"riccati_q", K.cert_q.residual_norm},
             {"rho_pq", K.rho_pq}}}};
    dump_to_file(j, path);
}

HinfController load_controller(const std::string& path) {
    const json j = parse_file(path);
    HinfController K;
    K.gamma = j.at("gamma");
    K.M = matrix_from_json(j.at("M"));
    K.N = matrix_from_json(j.at("N"));
    K.L = matrix_from_json(j.at("L"));
    K.R = matrix_from_json(j.at("R"));
    const auto& r = j.at("residuals");
    K.cert_p.residual_norm = r.at("riccati_p");
    K.cert_q.residual_norm = r.at("riccati_q");
    K.rho_pq = r.at("rho_pq");
    return K;
}

} // namespace aoctrl

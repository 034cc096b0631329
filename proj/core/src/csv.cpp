#include "aoctrl/csv.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "aoctrl/errors.hpp"

namespace aoctrl {

namespace {

// fixed shortest-roundtrip formatting keeps output byte-stable per platform
std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw ConfigError("cannot open for writing: " + path);
    os << content;
}

} // namespace

std::string sim_csv_string(const SimResult& result) {
    std::ostringstream os;
    os << "t,phi_tur_norm,phi_res_norm,phi_res_rss,u_norm\n";
    for (Eigen::Index i = 0; i < result.t.size(); ++i) {
        os << fmt(result.t(i)) << ',' << fmt(result.phi_tur_norm(i)) << ','
           << fmt(result.phi_res_norm(i)) << ',' << fmt(result.phi_res_rss(i))
           << ',' << fmt(result.u_norm(i)) << '\n';
    }
    return os.str();
}

void write_sim_csv(const SimResult& result, const std::string& path) {
    write_file(path, sim_csv_string(result));
}

void write_modes_csv(const std::vector<PlateShape>& shapes, const std::string& path) {
    std::ostringstream os;
    os << "k,j,lambda,c,a,omega\n";
    for (const PlateShape& s : shapes) {
        os << s.k << ',' << s.j << ',' << fmt(s.lambda) << ',' << fmt(s.c) << ','
           << fmt(s.a_norm) << ',' << fmt(std::sqrt(s.omega_sq)) << '\n';
    }
    write_file(path, os.str());
}

void write_turbulence_csv(const Eigen::MatrixXd& path_samples, double dt,
                          int first_index, const std::string& path) {
    std::ostringstream os;
    os << "t";
    for (Eigen::Index j = 0; j < path_samples.cols(); ++j)
        os << ",phi_" << (first_index + j);
    os << '\n';
    for (Eigen::Index i = 0; i < path_samples.rows(); ++i) {
        os << fmt(i * dt);
        for (Eigen::Index j = 0; j < path_samples.cols(); ++j)
            os << ',' << fmt(path_samples(i, j));
        os << '\n';
    }
    write_file(path, os.str());
}

} // namespace aoctrl

#include "aoctrl/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "aoctrl/errors.hpp"
#include "aoctrl/plate.hpp"
#include "aoctrl/quadrature.hpp"
#include "aoctrl/turbulence.hpp"
#include "aoctrl/zernike.hpp"

namespace aoctrl {

using nlohmann::json;

namespace {

json parse_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw ConfigError("fixture file missing: " + path);
    try {
        return json::parse(is);
    } catch (const json::parse_error& e) {
        throw ConfigError("malformed fixture " + path + ": " + e.what());
    }
}

bool has_flag(const std::vector<std::string>& flags, const std::string& f) {
    return std::find(flags.begin(), flags.end(), f) != flags.end();
}

} // namespace

bool FixtureReport::all_pass() const {
    for (const FixtureRowReport& r : rows)
        if (!r.pass && !r.skipped)
            return false;
    return true;
}

int FixtureReport::failures() const {
    int n = 0;
    for (const FixtureRowReport& r : rows)
        if (!r.pass && !r.skipped)
            ++n;
    return n;
}

PlateFixture load_plate_fixture(const std::string& path) {
    const json j = parse_file(path);
    PlateFixture fx;
    for (const json& r : j.at("rows")) {
        PlateFixtureRow row;
        row.row = r.at("row");
        row.i = r.at("i");
        row.j = r.at("j");
        row.k = r.at("k");
        row.lambda = r.at("lambda");
        row.c = r.at("c");
        row.a_norm = r.at("a");
        if (r.contains("flags"))
            row.flags = r.at("flags").get<std::vector<std::string>>();
        fx.rows.push_back(std::move(row));
    }
    return fx;
}

TurbulenceFixture load_turbulence_fixture(const std::string& path) {
    const json j = parse_file(path);
    TurbulenceFixture fx;
    fx.v_over_d = j.at("v_over_d");
    fx.d_over_r0 = j.at("d_over_r0");
    for (const json& r : j.at("rows")) {
        TurbulenceFixtureRow row;
        row.row = r.at("row");
        row.f = r.at("f");
        for (const json& g : r.at("g"))
            row.g.emplace_back(g.at("col").get<int>(), g.at("value").get<double>());
        if (r.contains("flags"))
            row.flags = r.at("flags").get<std::vector<std::string>>();
        fx.rows.push_back(std::move(row));
    }
    if (j.contains("anomalous_gram_entries"))
        for (const json& e : j.at("anomalous_gram_entries"))
            fx.anomalous_gram_entries.emplace_back(e[0].get<int>(), e[1].get<int>());
    return fx;
}

ZernikeFixture load_zernike_fixture(const std::string& path) {
    const json j = parse_file(path);
    ZernikeFixture fx;
    for (const json& r : j.at("rows")) {
        ZernikeFixtureRow row;
        row.i = r.at("i");
        row.n = r.at("n");
        row.m = r.at("m");
        row.kind = r.at("kind");
        fx.rows.push_back(std::move(row));
    }
    return fx;
}

FixtureReport validate_turbulence_fixture(const TurbulenceFixture& fx) {
    FixtureReport rep;
    const int n = static_cast<int>(fx.rows.size());
    const Eigen::MatrixXd F =
        build_F(zernike_modes(4, 3 + n), fx.v_over_d);

    // drift diagonal, rows not flagged anomalous, 0.1% band
    for (int r = 0; r < n; ++r) {
        const TurbulenceFixtureRow& row = fx.rows[static_cast<std::size_t>(r)];
        FixtureRowReport rr;
        rr.id = "F[" + std::to_string(row.row) + "]";
        rr.computed = F(r, r);
        rr.expected = row.f;
        rr.rel_err = std::abs(rr.computed - rr.expected) / std::abs(rr.expected);
        if (has_flag(row.flags, "anomalous")) {
            rr.skipped = true;
            rr.note = "anomalous-skip";
        } else {
            rr.pass = rr.rel_err <= 1e-3;
        }
        rep.rows.push_back(rr);
    }

    // Gram of the tabulated noise rows vs -(F P + P F'), 5% band
    const Eigen::MatrixXd P = noll_covariance_matrix(4, 3 + n, fx.d_over_r0);
    const Eigen::MatrixXd gram_computed = -(F * P + P * F.transpose());
    Eigen::MatrixXd Gp = Eigen::MatrixXd::Zero(n, n);
    for (const TurbulenceFixtureRow& row : fx.rows)
        for (const auto& [col, val] : row.g)
            Gp(row.row - 1, col - 1) = val;
    const Eigen::MatrixXd gram_printed = Gp * Gp.transpose();

    auto anomalous_entry = [&](int i, int j) {
        const auto& rows = fx.rows;
        if (has_flag(rows[static_cast<std::size_t>(i)].flags, "anomalous") ||
            has_flag(rows[static_cast<std::size_t>(j)].flags, "anomalous"))
            return true;
        for (const auto& [a, b] : fx.anomalous_gram_entries)
            if ((a - 1 == i && b - 1 == j) || (a - 1 == j && b - 1 == i))
                return true;
        return false;
    };

    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const bool printed_nonzero = gram_printed(i, j) != 0.0;
            const bool computed_nonzero = std::abs(gram_computed(i, j)) >
                                          1e-9 * gram_computed.diagonal().maxCoeff();
            if (!printed_nonzero && !computed_nonzero)
                continue;
            FixtureRowReport rr;
            rr.id = "GG'[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "]";
            rr.computed = gram_computed(i, j);
            rr.expected = gram_printed(i, j);
            rr.rel_err = std::abs(rr.computed - rr.expected) /
                         std::max(std::abs(rr.computed), 1e-12);
            if (anomalous_entry(i, j)) {
                rr.skipped = true;
                rr.note = "anomalous-skip";
            } else {
                rr.pass = rr.rel_err <= 0.05;
            }
            rep.rows.push_back(rr);
        }
    }
    return rep;
}

FixtureReport validate_plate_fixture(const PlateFixture& fx,
                                     const PhysicalParams& params) {
    FixtureReport rep;
    const std::vector<PlateShape> shapes =
        solve_mode_shapes(params, 5, static_cast<int>(fx.rows.size()) + 2);

    for (const PlateFixtureRow& row : fx.rows) {
        // pair by nearest lambda
        const PlateShape* best = nullptr;
        double dist = std::numeric_limits<double>::infinity();
        for (const PlateShape& s : shapes) {
            const double d = std::abs(s.lambda - row.lambda);
            if (d < dist) {
                dist = d;
                best = &s;
            }
        }
        auto push = [&](const std::string& what, double computed, double expected) {
            FixtureRowReport rr;
            rr.id = what + "[row " + std::to_string(row.row) + "]";
            rr.computed = computed;
            rr.expected = expected;
            rr.rel_err = std::abs(computed - expected) /
                         std::max(std::abs(expected), 1e-12);
            rr.pass = rr.rel_err <= 1e-3;
            rep.rows.push_back(rr);
        };
        push("lambda", best->lambda, row.lambda);
        push("c", best->c, row.c);
        push("a", best->a_norm, row.a_norm);

        if (best->k != row.k || best->j != row.j) {
            FixtureRowReport rr;
            rr.id = "index[row " + std::to_string(row.row) + "]";
            std::ostringstream os;
            os << "tabulated (j=" << row.j << ", k=" << row.k << ") vs solved (j="
               << best->j << ", k=" << best->k << ")";
            rr.note = os.str();
            // tabulated per-k root counting includes the rigid modes for k<=1;
            // only a k mismatch that is not flagged counts as a failure
            rr.skipped = has_flag(row.flags, "index_suspect") || best->k == row.k;
            rr.pass = false;
            rep.rows.push_back(rr);
        }

        const BoundaryResidual br = boundary_residual(*best, params.nu);
        FixtureRowReport rb;
        rb.id = "boundary[row " + std::to_string(row.row) + "]";
        rb.computed = std::max(br.moment, br.shear);
        rb.expected = 0.0;
        rb.rel_err = rb.computed;
        rb.pass = rb.computed <= 1e-8;
        rep.rows.push_back(rb);
    }
    return rep;
}

FixtureReport validate_zernike_fixture(const ZernikeFixture& fx) {
    FixtureReport rep;
    for (const ZernikeFixtureRow& row : fx.rows) {
        const ZernikeMode m = noll_indices(row.i);
        FixtureRowReport rr;
        rr.id = "zernike[" + std::to_string(row.i) + "]";
        const std::string kind = m.kind == AngularKind::Cosine ? "cosine"
                                 : m.kind == AngularKind::Sine ? "sine"
                                                               : "radial";
        rr.pass = (m.radial_order == row.n && m.azimuthal_order == row.m &&
                   kind == row.kind);
        if (!rr.pass)
            rr.note = "index table mismatch";
        rep.rows.push_back(rr);
    }

    // orthonormality by the stated quadrature: 64 radial x 256 azimuthal
    const QuadratureRule rad = gauss_legendre(64);
    const int ntheta = 256;
    const int count = static_cast<int>(fx.rows.size());
    double max_err = 0.0;
    for (int i = 1; i <= count; ++i) {
        for (int j = i; j <= count; ++j) {
            const ZernikeMode mi = noll_indices(i);
            const ZernikeMode mj = noll_indices(j);
            double acc = 0.0;
            for (Eigen::Index q = 0; q < rad.nodes.size(); ++q) {
                const double rho = rad.nodes(q);
                double ang = 0.0;
                for (int t = 0; t < ntheta; ++t) {
                    const double theta = 2.0 * M_PI * t / ntheta;
                    ang += zernike_eval(mi, rho, theta, 1.0) *
                           zernike_eval(mj, rho, theta, 1.0);
                }
                acc += rad.weights(q) * rho * ang * (2.0 * M_PI / ntheta);
            }
            acc /= M_PI;  // normalized disk measure
            const double expect = (i == j) ? 1.0 : 0.0;
            max_err = std::max(max_err, std::abs(acc - expect));
        }
    }
    FixtureRowReport rr;
    rr.id = "orthonormality[max deviation]";
    rr.computed = max_err;
    rr.rel_err = max_err;
    rr.pass = max_err <= 1e-8;
    rep.rows.push_back(rr);
    return rep;
}

} // namespace aoctrl

#include "aoctrl/plant.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "aoctrl/discretize.hpp"
#include "aoctrl/errors.hpp"
#include "aoctrl/quadrature.hpp"

namespace aoctrl {

namespace {

double zernike_plate_angular(const ZernikeMode& z, const PlateMode& b) {
    // int of the two angular factors over [0, 2pi], divided by pi
    if (z.kind == AngularKind::RadialOnly)
        return (b.shape.k == 0 && b.parity == Parity::Cosine) ? 2.0 : 0.0;
    if (b.shape.k != z.azimuthal_order)
        return 0.0;
    const bool same_kind = (z.kind == AngularKind::Cosine && b.parity == Parity::Cosine) ||
                           (z.kind == AngularKind::Sine && b.parity == Parity::Sine);
    return same_kind ? 1.0 : 0.0;
}

Eigen::MatrixXd projection_with_rule(const std::vector<ZernikeMode>& zernikes,
                                     const std::vector<PlateMode>& basis,
                                     const QuadratureRule& rule) {
    const int nb = static_cast<int>(basis.size());
    const int nz = static_cast<int>(zernikes.size());
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(nb, nz);
    for (int jz = 0; jz < nz; ++jz) {
        const ZernikeMode& z = zernikes[static_cast<std::size_t>(jz)];
        for (int ib = 0; ib < nb; ++ib) {
            const PlateMode& b = basis[static_cast<std::size_t>(ib)];
            const double ang = zernike_plate_angular(z, b);
            if (ang == 0.0)
                continue;
            double radial = 0.0;
            for (Eigen::Index q = 0; q < rule.nodes.size(); ++q) {
                const double rho = rule.nodes(q);
                radial += rule.weights(q) * zernike_radial(z, rho) *
                          mode_radial(b, rho) * rho;
            }
            Q(ib, jz) = ang * radial;
        }
    }
    return Q;
}

} // namespace

Eigen::MatrixXd build_projection(const std::vector<ZernikeMode>& zernikes,
                                 const std::vector<PlateMode>& basis,
                                 double a) {
    if (!(a > 0.0))
        throw std::invalid_argument("build_projection: disk radius must be positive");
    if (zernikes.empty() || basis.empty())
        throw std::invalid_argument("build_projection: empty basis");
    const Eigen::MatrixXd Q64 = projection_with_rule(zernikes, basis, gauss_legendre(64));
    const Eigen::MatrixXd Q128 = projection_with_rule(zernikes, basis, gauss_legendre(128));
    const double drift = (Q64 - Q128).cwiseAbs().maxCoeff();
    if (drift > 1e-8) {
        std::ostringstream os;
        os << "build_projection: radial quadrature has not converged (64 vs 128 "
              "nodes differ by "
           << drift << ")";
        throw NumericalError(os.str());
    }
    return Q128;
}

StandardPlant assemble_plant(const PhysicalParams& params,
                             const std::vector<PlateMode>& basis,
                             const TurbulenceModel& turb,
                             const Eigen::MatrixXd& projection) {
    params.validate();
    const int nb = static_cast<int>(basis.size());
    const int nz = turb.size();
    if (projection.rows() != nb || projection.cols() != nz)
        throw std::invalid_argument("assemble_plant: projection dimensions mismatch");

    StandardPlant p;
    p.params = params;
    p.dims.n_basis = nb;
    p.dims.n_zernike = nz;
    p.dims.n_x = 2 * nb + nz;
    p.dims.n_w = 3 * nb + nz;
    p.dims.n_u = nb;
    p.dims.n_z = 2 * nb;
    p.dims.n_y = 2 * nb;

    p.projection = projection;
    p.gram = gram_matrix(basis);
    p.omega_sq.resize(nb);
    for (int i = 0; i < nb; ++i) {
        const double w2 = basis[static_cast<std::size_t>(i)].shape.omega_sq;
        if (!(w2 > 0.0) || !std::isfinite(w2))
            throw std::invalid_argument("assemble_plant: basis carries no valid omega_sq");
        p.omega_sq(i) = w2;
    }

    // <Laplacian B_j, B_i> block shared by actuation and piezo sensing
    const Eigen::MatrixXd L = laplacian_gram(basis, params.radius);
    const double phase = params.phase_per_meter();

    p.A = Eigen::MatrixXd::Zero(p.dims.n_x, p.dims.n_x);
    p.A.block(0, nb, nb, nb).setIdentity();
    p.A.block(nb, 0, nb, nb) = (-p.omega_sq).asDiagonal();
    p.A.block(2 * nb, 2 * nb, nz, nz) = turb.F;

    // w = (w_mod, w_SH, w_tur, w_pe)
    p.B1 = Eigen::MatrixXd::Zero(p.dims.n_x, p.dims.n_w);
    p.B1.block(nb, 0, nb, nb) =
        params.b_weight * Eigen::MatrixXd::Identity(nb, nb);
    p.B1.block(2 * nb, 2 * nb, nz, nz) = turb.G;

    p.B2 = Eigen::MatrixXd::Zero(p.dims.n_x, nb);
    p.B2.block(nb, 0, nb, nb) = (params.d31 / params.rho) * L;

    // z = (phi_res in plate coordinates, u)
    p.C1 = Eigen::MatrixXd::Zero(p.dims.n_z, p.dims.n_x);
    p.C1.block(0, 0, nb, nb) = -phase * Eigen::MatrixXd::Identity(nb, nb);
    p.C1.block(0, 2 * nb, nb, nz) = projection;
    p.D12 = Eigen::MatrixXd::Zero(p.dims.n_z, nb);
    p.D12.block(nb, 0, nb, nb).setIdentity();

    // y = (y_pe, y_SH); the optical row repeats C1's optical row exactly
    p.C2 = Eigen::MatrixXd::Zero(p.dims.n_y, p.dims.n_x);
    p.C2.block(0, 0, nb, nb) = params.e31 * L;
    p.C2.block(nb, 0, nb, p.dims.n_x) = p.C1.block(0, 0, nb, p.dims.n_x);

    p.D21 = Eigen::MatrixXd::Zero(p.dims.n_y, p.dims.n_w);
    p.D21.block(0, 2 * nb + nz, nb, nb) =
        params.d_weight * Eigen::MatrixXd::Identity(nb, nb);
    p.D21.block(nb, nb, nb, nb) =
        params.c_weight * Eigen::MatrixXd::Identity(nb, nb);

    if (!p.A.allFinite() || !p.B1.allFinite() || !p.B2.allFinite() ||
        !p.C1.allFinite() || !p.C2.allFinite())
        throw NumericalError("assemble_plant: non-finite entries");

    // diagonal similarity balancing plate meters/velocities against radians
    p.state_scaling.resize(p.dims.n_x);
    for (int i = 0; i < nb; ++i) {
        p.state_scaling(i) = 1.0 / phase;
        p.state_scaling(nb + i) = std::sqrt(p.omega_sq(i)) / phase;
    }
    p.state_scaling.segment(2 * nb, nz).setOnes();
    return p;
}

OpenLoopResponse open_loop_response(const StandardPlant& plant,
                                    const Eigen::MatrixXd& u_series,
                                    const Eigen::MatrixXd& w_series, double dt,
                                    const Eigen::VectorXd& x0) {
    if (!(dt > 0.0))
        throw std::invalid_argument("open_loop_response: dt must be positive");
    if (u_series.rows() != w_series.rows())
        throw std::invalid_argument("open_loop_response: series lengths differ");
    if (u_series.cols() != plant.dims.n_u || w_series.cols() != plant.dims.n_w)
        throw std::invalid_argument("open_loop_response: channel counts mismatch");
    if (!u_series.allFinite() || !w_series.allFinite())
        throw std::invalid_argument("open_loop_response: non-finite inputs");

    const int steps = static_cast<int>(u_series.rows());
    const int nx = plant.dims.n_x;

    // scale states for a well-conditioned exponential; inputs/outputs unchanged
    Eigen::VectorXd T = plant.state_scaling.size() == nx
                            ? plant.state_scaling
                            : Eigen::VectorXd::Ones(nx);
    const Eigen::VectorXd Ti = T.cwiseInverse();
    const Eigen::MatrixXd As = Ti.asDiagonal() * plant.A * T.asDiagonal();
    Eigen::MatrixXd B(nx, plant.dims.n_w + plant.dims.n_u);
    B << Ti.asDiagonal() * plant.B1, Ti.asDiagonal() * plant.B2;
    const ZohSystem zoh = zoh_discretize(As, B, dt);

    OpenLoopResponse out;
    out.x.resize(steps + 1, nx);
    out.y.resize(steps, plant.dims.n_y);
    out.z.resize(steps, plant.dims.n_z);

    Eigen::VectorXd xs = Eigen::VectorXd::Zero(nx);
    if (x0.size() == nx)
        xs = Ti.asDiagonal() * x0;
    else if (x0.size() != 0)
        throw std::invalid_argument("open_loop_response: x0 has wrong dimension");

    const Eigen::MatrixXd C1s = plant.C1 * T.asDiagonal();
    const Eigen::MatrixXd C2s = plant.C2 * T.asDiagonal();

    out.x.row(0) = (T.asDiagonal() * xs).transpose();
    Eigen::VectorXd wu(plant.dims.n_w + plant.dims.n_u);
    for (int k = 0; k < steps; ++k) {
        const Eigen::VectorXd w = w_series.row(k).transpose();
        const Eigen::VectorXd u = u_series.row(k).transpose();
        out.y.row(k) = (C2s * xs + plant.D21 * w).transpose();
        out.z.row(k) = (C1s * xs + plant.D12 * u).transpose();
        wu << w, u;
        xs = zoh.Ad * xs + zoh.Bd * wu;
        out.x.row(k + 1) = (T.asDiagonal() * xs).transpose();
    }
    return out;
}

} // namespace aoctrl

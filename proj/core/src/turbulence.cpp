#include "aoctrl/turbulence.hpp"

#include <cmath>
#include <stdexcept>

#include "aoctrl/errors.hpp"
#include "aoctrl/lyapunov.hpp"
#include "aoctrl/rng.hpp"

namespace aoctrl {

double cutoff_frequency(int radial_order, double v_over_d) {
    if (radial_order < 0)
        throw std::invalid_argument("cutoff_frequency: radial order must be >= 0");
    if (!(v_over_d > 0.0))
        throw std::invalid_argument("cutoff_frequency: V/D must be positive");
    return 0.3 * (radial_order + 1) * v_over_d;
}

Eigen::MatrixXd build_F(const std::vector<ZernikeMode>& modes, double v_over_d) {
    for (const ZernikeMode& m : modes)
        if (m.noll_index < 4)
            throw std::invalid_argument(
                "build_F: piston/tip/tilt are excluded from the turbulence model");
    const int n = static_cast<int>(modes.size());
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        F(i, i) = -2.0 * M_PI *
                  cutoff_frequency(modes[static_cast<std::size_t>(i)].radial_order,
                                   v_over_d);
    return F;
}

Eigen::MatrixXd build_G(const Eigen::MatrixXd& F, const Eigen::MatrixXd& P_inf) {
    const Eigen::MatrixXd rhs = -(F * P_inf + P_inf * F.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (rhs + rhs.transpose()));
    const double floor = -1e-10 * P_inf.trace();
    if (eig.eigenvalues().minCoeff() < floor)
        throw NumericalError("build_G: -(F P + P F') is indefinite; inconsistent inputs");
    Eigen::VectorXd d = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * d.asDiagonal() * eig.eigenvectors().transpose();
}

TurbulenceModel build_turbulence_model(int n_zernike, double v_over_d,
                                       double d_over_r0) {
    if (n_zernike < 4)
        throw std::invalid_argument("build_turbulence_model: need N_Z >= 4");
    TurbulenceModel model;
    model.modes = zernike_modes(4, n_zernike);
    model.v_over_d = v_over_d;
    model.d_over_r0 = d_over_r0;
    model.F = build_F(model.modes, v_over_d);
    model.P_inf = noll_covariance_matrix(4, n_zernike, d_over_r0);
    model.G = build_G(model.F, model.P_inf);
    return model;
}

void exact_step_matrices(const TurbulenceModel& model, double dt,
                         Eigen::MatrixXd& Ad, Eigen::MatrixXd& noise_cov) {
    const int n = model.size();
    Ad = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        Ad(i, i) = std::exp(model.F(i, i) * dt);
    const Eigen::MatrixXd GGt = model.G * model.G.transpose();
    noise_cov.resize(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double s = model.F(i, i) + model.F(j, j);
            // int_0^dt e^{(fi+fj)s} ds
            const double w = (std::abs(s) < 1e-300) ? dt : (std::expm1(s * dt) / s);
            noise_cov(i, j) = GGt(i, j) * w;
        }
    }
}

Eigen::MatrixXd sample_path(const TurbulenceModel& model, double dt, int steps,
                            std::uint64_t seed) {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("sample_path: dt must be positive and finite");
    if (steps < 1)
        throw std::invalid_argument("sample_path: steps must be >= 1");
    const int n = model.size();

    Eigen::MatrixXd Ad, cov;
    exact_step_matrices(model, dt, Ad, cov);
    const Eigen::MatrixXd Lnoise = symmetric_sqrt(cov);
    const Eigen::MatrixXd Linit = symmetric_sqrt(model.P_inf);

    GaussianSampler rng(seed);
    Eigen::MatrixXd path(steps, n);
    Eigen::VectorXd phi = Linit * rng.vector(n);
    path.row(0) = phi.transpose();
    for (int k = 1; k < steps; ++k) {
        phi = Ad * phi + Lnoise * rng.vector(n);
        path.row(k) = phi.transpose();
    }
    return path;
}

} // namespace aoctrl

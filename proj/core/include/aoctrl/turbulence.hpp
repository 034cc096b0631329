#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "aoctrl/zernike.hpp"

namespace aoctrl {

/// Shaping filter phi' = F phi + G w over Zernike modes 4..N_Z, with w a
/// unit-intensity white noise, together with the stationary covariance.
struct TurbulenceModel {
    std::vector<ZernikeMode> modes;
    Eigen::MatrixXd F;      // stable diagonal drift, s^-1
    Eigen::MatrixXd G;      // symmetric PSD noise input factor
    Eigen::MatrixXd P_inf;  // stationary covariance, rad^2
    double v_over_d = 0.0;
    double d_over_r0 = 0.0;

    int size() const { return static_cast<int>(modes.size()); }
};

/// f_c = 0.3 (n + 1) V/D.
double cutoff_frequency(int radial_order, double v_over_d);

/// F = diag(-2 pi f_ci).  Modes must exclude piston and tip/tilt.
Eigen::MatrixXd build_F(const std::vector<ZernikeMode>& modes, double v_over_d);

/// Any G with G G^T = -(F P + P F^T); this one is the symmetric PSD square
/// root after clipping negative eigenvalues at zero.  Throws NumericalError
/// when the right-hand side is indefinite beyond -1e-10 * trace.
Eigen::MatrixXd build_G(const Eigen::MatrixXd& F, const Eigen::MatrixXd& P_inf);

/// Model over modes 4..n_zernike at the given wind/aperture and turbulence
/// strength parameters.
TurbulenceModel build_turbulence_model(int n_zernike, double v_over_d,
                                       double d_over_r0);

/// Stationary sample path by exact discretization: rows are phi(t_k) for
/// t_k = k dt, k = 0..steps-1; phi(0) ~ N(0, P_inf).  Identical seeds give
/// identical paths.
Eigen::MatrixXd sample_path(const TurbulenceModel& model, double dt, int steps,
                            std::uint64_t seed);

/// One-step transition matrix and integrated process-noise covariance of the
/// exact discretization (closed form for diagonal F).
void exact_step_matrices(const TurbulenceModel& model, double dt,
                         Eigen::MatrixXd& Ad, Eigen::MatrixXd& noise_cov);

} // namespace aoctrl

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "aoctrl/plate.hpp"
#include "aoctrl/turbulence.hpp"

namespace aoctrl {

struct PlantDims {
    int n_basis = 0;    // N_B, plate basis functions
    int n_zernike = 0;  // N_z, turbulence modes
    int n_x = 0;        // 2 N_B + N_z
    int n_w = 0;        // 3 N_B + N_z  (w_mod, w_SH, w_tur, w_pe)
    int n_u = 0;        // N_B
    int n_z = 0;        // 2 N_B  (residual phase in plate coords, u)
    int n_y = 0;        // 2 N_B  (y_pe, y_SH in plate coords)
};

/// The truncated standard plant
///   x' = A x + B1 w + B2 u,  z = C1 x + D12 u,  y = C2 x + D21 w
/// with x = (e, e', phi_tur).
struct StandardPlant {
    Eigen::MatrixXd A, B1, B2, C1, D12, C2, D21;
    PlantDims dims;
    PhysicalParams params;

    // assembly byproducts used downstream (norms, export, conditioning)
    Eigen::MatrixXd projection;     // Q, N_B x N_z
    Eigen::MatrixXd gram;           // plate Gram, N_B x N_B
    Eigen::VectorXd omega_sq;       // plate eigenfrequencies squared
    Eigen::VectorXd state_scaling;  // diagonal similarity for synthesis/sim

    /// Slices of the state vector.
    auto plate_pos(const Eigen::VectorXd& x) const { return x.segment(0, dims.n_basis); }
    auto plate_vel(const Eigen::VectorXd& x) const { return x.segment(dims.n_basis, dims.n_basis); }
    auto turb(const Eigen::VectorXd& x) const { return x.segment(2 * dims.n_basis, dims.n_zernike); }
};

/// Q_ij = <Z_{j+3}, B_i> under the normalized disk measure; the azimuthal
/// integral is evaluated in closed form, the radial one by Gauss-Legendre.
/// Throws NumericalError when doubling the radial rule moves any entry by
/// more than 1e-8.
Eigen::MatrixXd build_projection(const std::vector<ZernikeMode>& zernikes,
                                 const std::vector<PlateMode>& basis,
                                 double a);

/// Fill the seven block matrices from the plate basis, turbulence model and
/// projection.
StandardPlant assemble_plant(const PhysicalParams& params,
                             const std::vector<PlateMode>& basis,
                             const TurbulenceModel& turb,
                             const Eigen::MatrixXd& projection);

/// Exact-discretization (ZOH inputs) open-loop time stepping.
struct OpenLoopResponse {
    Eigen::MatrixXd x;  // (steps+1) x n_x
    Eigen::MatrixXd y;  // steps x n_y
    Eigen::MatrixXd z;  // steps x n_z
};
OpenLoopResponse open_loop_response(const StandardPlant& plant,
                                    const Eigen::MatrixXd& u_series,
                                    const Eigen::MatrixXd& w_series, double dt,
                                    const Eigen::VectorXd& x0 = {});

} // namespace aoctrl

#pragma once

#include <vector>

#include <Eigen/Dense>

namespace aoctrl {

/// Physical constants of the mirror and the disturbance weights.
struct PhysicalParams {
    double rho = 16.3;             // surface density, kg m^-2
    double q1 = 84.0;              // stiffness, N m
    double q2 = 11.25e8;           // stiffness correction, N m^-3
    double nu = 0.2;               // Poisson ratio
    double radius = 25e-3;         // mirror radius a, m
    double d31 = -0.0044;          // actuation coefficient, N V^-1
    double e31 = -5.60e3;          // sensing coefficient, V m
    double wavelength = 550e-9;    // light wavelength, m
    double wind_speed = 9.0;       // V, m s^-1
    double pupil_diameter = 1e-2;  // D, m
    double b_weight = 0.001;       // model-error disturbance weight
    double c_weight = 0.002;       // wavefront-sensor noise weight
    double d_weight = 0.003;       // piezo-sensor noise weight

    /// Throws ConfigError if any value is out of its documented range.
    void validate() const;

    double phase_per_meter() const { return 4.0 * M_PI / wavelength; }
};

enum class Parity { Cosine, Sine };

/// One radial shape of the free-edge plate eigenproblem: the root lambda of
/// the characteristic determinant together with the Bessel mixing and
/// normalization coefficients.  j counts the elastic roots per azimuthal
/// order k (the lambda = 0 rigid modes are excluded).
struct PlateShape {
    int k = 0;
    int j = 0;
    double lambda = 0.0;
    double c = 0.0;       // I_k admixture
    double a_norm = 0.0;  // unit norm under (1/(pi a^2)) * dOmega
    double omega_sq = 0.0;
};

/// One basis function: a shape together with cos/sin parity.
struct PlateMode {
    PlateShape shape;
    Parity parity = Parity::Cosine;
};

/// Residuals of the two free-edge boundary conditions at r = a, relative to
/// the scale of the second-derivative terms.
struct BoundaryResidual {
    double moment = 0.0;
    double shear = 0.0;
};

/// Find the first `count` shapes over azimuthal orders k <= k_max, sorted by
/// increasing lambda.  Roots are bracketed by a fixed scan, bisected, and
/// polished by secant iteration to 1e-12.
std::vector<PlateShape> solve_mode_shapes(const PhysicalParams& params,
                                          int k_max, int count,
                                          double scan_step = 0.05);

/// Apply the cosine/sine alternation: k = 0 shapes contribute one function,
/// k >= 1 shapes a cosine followed by a sine.  Input must be lambda-sorted.
std::vector<PlateMode> expand_basis(const std::vector<PlateShape>& shapes);

/// Radial part of the mode at rho = r/a.
double mode_radial(const PlateMode& mode, double rho);

/// Radial part of the (physical) Laplacian of the mode at rho = r/a:
/// a_norm (lambda/a)^2 (-J_k + c I_k)(lambda rho).
double mode_laplacian_radial(const PlateMode& mode, double rho, double a);

double mode_eval(const PlateMode& mode, double r, double theta, double a);
double mode_laplacian_eval(const PlateMode& mode, double r, double theta, double a);

/// Pairwise inner products under the normalized disk measure
/// (1/(pi a^2)) * dOmega; azimuthal integrals in closed form, radial by
/// Gauss-Legendre.
Eigen::MatrixXd gram_matrix(const std::vector<PlateMode>& basis);

/// L[i][j] = <Laplacian B_j, B_i> under the same measure.  The Laplacian is
/// taken in physical coordinates, so entries carry 1/m^2.  Not symmetric:
/// Green's identity leaves boundary terms on free-edge modes.
Eigen::MatrixXd laplacian_gram(const std::vector<PlateMode>& basis, double a);

/// Boundary-condition residuals of a solved shape (diagnostic/postcondition).
BoundaryResidual boundary_residual(const PlateShape& shape, double nu);

/// Characteristic determinant of the free-edge conditions at lambda
/// (exposed for root-stability tests).
double characteristic_determinant(int k, double lambda, double nu);

} // namespace aoctrl

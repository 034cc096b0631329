#pragma once

#include <vector>

#include <Eigen/Dense>

namespace aoctrl {

enum class AngularKind { Cosine, Sine, RadialOnly };

/// One Zernike function in Noll single-index form, restricted to the
/// first 15 entries of the indexing table this project uses.
struct ZernikeMode {
    int noll_index = 0;    // i >= 1
    int radial_order = 0;  // n
    int azimuthal_order = 0; // m
    AngularKind kind = AngularKind::RadialOnly;
};

inline constexpr int kZernikeTableSize = 15;

/// Map a Noll index to its (n, m, kind) triple.  Throws std::out_of_range
/// when i is outside [1, cap] or the table.
ZernikeMode noll_indices(int i, int cap = kZernikeTableSize);

/// All modes for indices [first, last].
std::vector<ZernikeMode> zernike_modes(int first, int last);

/// Radial part (including the normalization constant) at rho = r/a in [0, 1].
double zernike_radial(const ZernikeMode& mode, double rho);

/// Z_i(r, theta) on the disk of radius a.  Throws std::domain_error when
/// r < 0 or r > a.
double zernike_eval(const ZernikeMode& mode, double r, double theta, double a);

/// Spatial covariance E(phi_i phi_j) of Kolmogorov-turbulence expansion
/// coefficients.  Zero whenever the selection rules decouple the modes
/// (different m, different angular kind).  Piston (i = 1) is rejected.
double noll_covariance(const ZernikeMode& mode_i, const ZernikeMode& mode_j,
                       double d_over_r0);

/// Covariance matrix over Noll indices [first, last].
Eigen::MatrixXd noll_covariance_matrix(int first, int last, double d_over_r0);

} // namespace aoctrl

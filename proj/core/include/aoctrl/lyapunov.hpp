#pragma once

#include <Eigen/Dense>

namespace aoctrl {

/// Solve A X + X A^T + Q = 0 for stable A (Bartels-Stewart on the complex
/// Schur form).  Throws NumericalError when eigenvalue sums of A vanish.
Eigen::MatrixXd solve_continuous_lyapunov(const Eigen::MatrixXd& A,
                                          const Eigen::MatrixXd& Q);

/// Symmetric PSD square root with eigenvalue clipping at zero.
Eigen::MatrixXd symmetric_sqrt(const Eigen::MatrixXd& S);

} // namespace aoctrl

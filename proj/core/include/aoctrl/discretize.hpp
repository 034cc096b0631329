#pragma once

#include <Eigen/Dense>

namespace aoctrl {

/// Zero-order-hold discretization via the augmented matrix exponential.
struct ZohSystem {
    Eigen::MatrixXd Ad;
    Eigen::MatrixXd Bd;
};
ZohSystem zoh_discretize(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                         double dt);

/// Exact one-step statistics of x' = A x + B w with unit-intensity white w:
/// Ad = exp(A dt) and cov = int_0^dt exp(A s) B B^T exp(A^T s) ds, computed
/// with the Van Loan block-exponential.
struct DiscretizedNoise {
    Eigen::MatrixXd Ad;
    Eigen::MatrixXd cov;
};
DiscretizedNoise exact_discretize_noise(const Eigen::MatrixXd& A,
                                        const Eigen::MatrixXd& BBt, double dt);

} // namespace aoctrl

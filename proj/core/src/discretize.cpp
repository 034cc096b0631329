#include "aoctrl/discretize.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <stdexcept>

namespace aoctrl {

ZohSystem zoh_discretize(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                         double dt) {
    if (!(dt > 0.0))
        throw std::invalid_argument("zoh_discretize: dt must be positive");
    const Eigen::Index n = A.rows(), m = B.cols();
    Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(n + m, n + m);
    aug.topLeftCorner(n, n) = A;
    aug.topRightCorner(n, m) = B;
    const Eigen::MatrixXd E = (aug * dt).exp();
    ZohSystem out;
    out.Ad = E.topLeftCorner(n, n);
    out.Bd = E.topRightCorner(n, m);
    return out;
}

DiscretizedNoise exact_discretize_noise(const Eigen::MatrixXd& A,
                                        const Eigen::MatrixXd& BBt, double dt) {
    if (!(dt > 0.0))
        throw std::invalid_argument("exact_discretize_noise: dt must be positive");
    const Eigen::Index n = A.rows();
    // exp([[-A, BB'], [0, A']] dt) = [[*, F3], [0, F4]] with
    // cov = F4' F3 and Ad = F4'.
    Eigen::MatrixXd blk = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    blk.topLeftCorner(n, n) = -A;
    blk.topRightCorner(n, n) = BBt;
    blk.bottomRightCorner(n, n) = A.transpose();
    const Eigen::MatrixXd E = (blk * dt).exp();
    DiscretizedNoise out;
    out.Ad = E.bottomRightCorner(n, n).transpose();
    out.cov = out.Ad * E.topRightCorner(n, n);
    out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
    return out;
}

} // namespace aoctrl

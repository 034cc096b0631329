#include "aoctrl/lyapunov.hpp"

#include <complex>

#include "aoctrl/errors.hpp"

namespace aoctrl {

Eigen::MatrixXd solve_continuous_lyapunov(const Eigen::MatrixXd& A,
                                          const Eigen::MatrixXd& Q) {
    const Eigen::Index n = A.rows();
    if (A.cols() != n || Q.rows() != n || Q.cols() != n)
        throw std::invalid_argument("solve_continuous_lyapunov: dimension mismatch");

    // Bartels-Stewart on the complex Schur form: A = U T U*, then
    // T Y + Y T* = -U* Q U column by column.
    Eigen::ComplexSchur<Eigen::MatrixXd> schur(A);
    if (schur.info() != Eigen::Success)
        throw NumericalError("solve_continuous_lyapunov: Schur decomposition failed");
    const Eigen::MatrixXcd T = schur.matrixT();
    const Eigen::MatrixXcd U = schur.matrixU();

    const Eigen::MatrixXcd Qt = U.adjoint() * Q.cast<std::complex<double>>() * U;
    Eigen::MatrixXcd Y = Eigen::MatrixXcd::Zero(n, n);
    const double scale = T.norm();
    // (Y T^H) column j reaches across columns k >= j, so solve backwards
    for (Eigen::Index j = n - 1; j >= 0; --j) {
        Eigen::VectorXcd rhs = -Qt.col(j);
        for (Eigen::Index k = j + 1; k < n; ++k)
            rhs -= Y.col(k) * std::conj(T(j, k));
        Eigen::MatrixXcd Tj = T;
        const std::complex<double> shift = std::conj(T(j, j));
        Tj.diagonal().array() += shift;
        for (Eigen::Index d = 0; d < n; ++d)
            if (std::abs(Tj(d, d)) < 1e-14 * std::max(scale, 1.0))
                throw NumericalError(
                    "solve_continuous_lyapunov: eigenvalue sum near zero (A not "
                    "suitable)");
        Y.col(j) = Tj.triangularView<Eigen::Upper>().solve(rhs);
    }
    const Eigen::MatrixXcd X = U * Y * U.adjoint();
    Eigen::MatrixXd Xr = X.real();
    return 0.5 * (Xr + Xr.transpose());
}

Eigen::MatrixXd symmetric_sqrt(const Eigen::MatrixXd& S) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (S + S.transpose()));
    return eig.eigenvectors() *
           eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
           eig.eigenvectors().transpose();
}

} // namespace aoctrl

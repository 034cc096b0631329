#include "aoctrl/riccati.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <vector>

#include <lapacke.h>

#include "aoctrl/errors.hpp"

namespace aoctrl {

namespace {

constexpr double kAxisTol = 1e-8;       // relative to the Hamiltonian scale
constexpr double kMaxSubspaceCond = 1e10;
constexpr double kMaxResidual = 1e-8;

lapack_logical select_left_half_plane(const double* re, const double* /*im*/) {
    return *re < 0.0 ? 1 : 0;
}

struct SubspaceResult {
    Eigen::MatrixXd basis;  // 2n x n
    double min_axis_distance = 0.0;
    double scale = 0.0;  // max |eigenvalue|
    int stable_count = 0;
    bool schur_ok = true;
    std::string detail;
};

SubspaceResult stable_subspace_schur(const Eigen::MatrixXd& H) {
    const lapack_int n2 = static_cast<lapack_int>(H.rows());
    Eigen::MatrixXd A = H;  // overwritten by dgees
    Eigen::MatrixXd vs(n2, n2);
    std::vector<double> wr(static_cast<std::size_t>(n2)), wi(static_cast<std::size_t>(n2));
    lapack_int sdim = 0;

    SubspaceResult out;
    const lapack_int info = LAPACKE_dgees(
        LAPACK_COL_MAJOR, 'V', 'S', &select_left_half_plane, n2, A.data(), n2,
        &sdim, wr.data(), wi.data(), vs.data(), n2);
    if (info != 0) {
        out.schur_ok = false;
        std::ostringstream os;
        os << "dgees returned info=" << info;
        if (info == n2 + 1)
            os << " (eigenvalue reordering failed)";
        if (info == n2 + 2)
            os << " (roundoff moved eigenvalues across the selection boundary)";
        out.detail = os.str();
        return out;
    }
    out.stable_count = static_cast<int>(sdim);
    out.scale = 0.0;
    out.min_axis_distance = std::numeric_limits<double>::infinity();
    for (lapack_int i = 0; i < n2; ++i) {
        const double mag = std::hypot(wr[static_cast<std::size_t>(i)],
                                      wi[static_cast<std::size_t>(i)]);
        out.scale = std::max(out.scale, mag);
        out.min_axis_distance =
            std::min(out.min_axis_distance, std::abs(wr[static_cast<std::size_t>(i)]));
    }
    out.basis = vs.leftCols(sdim);
    return out;
}

SubspaceResult stable_subspace_eigenvectors(const Eigen::MatrixXd& H) {
    Eigen::EigenSolver<Eigen::MatrixXd> eig(H);
    SubspaceResult out;
    if (eig.info() != Eigen::Success) {
        out.schur_ok = false;
        out.detail = "eigen decomposition failed";
        return out;
    }
    const auto& vals = eig.eigenvalues();
    const auto& vecs = eig.eigenvectors();
    const Eigen::Index n2 = H.rows();
    out.scale = 0.0;
    out.min_axis_distance = std::numeric_limits<double>::infinity();
    std::vector<Eigen::VectorXd> cols;
    for (Eigen::Index i = 0; i < n2; ++i) {
        out.scale = std::max(out.scale, std::abs(vals(i)));
        out.min_axis_distance = std::min(out.min_axis_distance, std::abs(vals(i).real()));
        if (vals(i).real() >= 0.0)
            continue;
        if (std::abs(vals(i).imag()) == 0.0) {
            cols.push_back(vecs.col(i).real());
        } else if (vals(i).imag() > 0.0) {
            // one representative per conjugate pair contributes two real columns
            cols.push_back(vecs.col(i).real());
            cols.push_back(vecs.col(i).imag());
        }
    }
    out.stable_count = static_cast<int>(cols.size());
    out.basis.resize(n2, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c)
        out.basis.col(static_cast<Eigen::Index>(c)) = cols[c];
    // orthonormalize; the span is unchanged and the riccati solve conditions better
    if (out.basis.cols() > 0) {
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(out.basis);
        out.basis = qr.householderQ() * Eigen::MatrixXd::Identity(n2, out.basis.cols());
    }
    return out;
}

RiccatiOutcome fail(RiccatiFailure f, std::string detail, bool marginal = false) {
    RiccatiOutcome out;
    out.failure = f;
    out.detail = std::move(detail);
    out.marginal = marginal;
    return out;
}

} // namespace

const char* to_string(RiccatiFailure f) {
    switch (f) {
    case RiccatiFailure::None: return "none";
    case RiccatiFailure::AxisEigenvalues: return "hamiltonian eigenvalues on the imaginary axis";
    case RiccatiFailure::WrongInertia: return "stable subspace dimension != n";
    case RiccatiFailure::IllConditioned: return "ill-conditioned subspace basis";
    case RiccatiFailure::Indefinite: return "solution not positive semidefinite";
    case RiccatiFailure::NotStabilizing: return "closed matrix not stable";
    case RiccatiFailure::LargeResidual: return "substitution residual too large";
    case RiccatiFailure::SchurFailure: return "schur factorization/reordering failure";
    }
    return "unknown";
}

double spectral_abscissa(const Eigen::MatrixXd& A) {
    if (A.rows() == 0)
        return -std::numeric_limits<double>::infinity();
    Eigen::EigenSolver<Eigen::MatrixXd> eig(A, /*computeEigenvectors=*/false);
    return eig.eigenvalues().real().maxCoeff();
}

RiccatiOutcome solve_game_riccati(const Eigen::MatrixXd& A,
                                  const Eigen::MatrixXd& B1,
                                  const Eigen::MatrixXd& B2,
                                  const Eigen::MatrixXd& C1, double gamma,
                                  SubspaceRoute route) {
    const Eigen::Index n = A.rows();
    if (A.cols() != n || B1.rows() != n || B2.rows() != n || C1.cols() != n)
        throw std::invalid_argument("solve_game_riccati: dimension mismatch");
    if (!(gamma > 0.0))
        throw std::invalid_argument("solve_game_riccati: gamma must be positive");

    const Eigen::MatrixXd R = (B1 * B1.transpose()) / (gamma * gamma) -
                              B2 * B2.transpose();
    const Eigen::MatrixXd Qc = C1.transpose() * C1;

    Eigen::MatrixXd H(2 * n, 2 * n);
    H << A, R, -Qc, -A.transpose();

    const SubspaceResult sub = (route == SubspaceRoute::OrderedSchur)
                                   ? stable_subspace_schur(H)
                                   : stable_subspace_eigenvectors(H);
    if (!sub.schur_ok)
        return fail(RiccatiFailure::SchurFailure, sub.detail);

    const double axis_tol = kAxisTol * std::max(sub.scale, 1.0);
    if (sub.min_axis_distance < axis_tol) {
        std::ostringstream os;
        os << "min |Re| = " << sub.min_axis_distance << " < " << axis_tol;
        return fail(RiccatiFailure::AxisEigenvalues, os.str(), true);
    }
    const bool marginal = sub.min_axis_distance < 10.0 * axis_tol;

    if (sub.stable_count != n) {
        std::ostringstream os;
        os << "stable subspace has dimension " << sub.stable_count << ", expected " << n;
        return fail(RiccatiFailure::WrongInertia, os.str(), marginal);
    }

    const Eigen::MatrixXd X1 = sub.basis.topRows(n);
    const Eigen::MatrixXd X2 = sub.basis.bottomRows(n);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(X1);
    const double cond = svd.singularValues()(0) /
                        std::max(svd.singularValues()(n - 1), 1e-300);
    if (cond > kMaxSubspaceCond) {
        std::ostringstream os;
        os << "subspace basis condition " << cond;
        return fail(RiccatiFailure::IllConditioned, os.str(), marginal);
    }

    // P = X2 X1^-1, solved as X1' P' = X2'
    Eigen::MatrixXd P = X1.transpose().partialPivLu().solve(X2.transpose()).transpose();
    P = 0.5 * (P + P.transpose()).eval();

    RiccatiCertificate cert;
    cert.P = P;
    cert.subspace_condition = cond;
    cert.closed_matrix = A + R * P;
    cert.stable = spectral_abscissa(cert.closed_matrix) < 0.0;

    const Eigen::MatrixXd t1 = A.transpose() * P;
    const Eigen::MatrixXd t2 = P * A;
    const Eigen::MatrixXd t3 = P * R * P;
    const double denom = t1.norm() + t2.norm() + t3.norm() + Qc.norm();
    cert.residual_norm = (t1 + t2 + t3 + Qc).norm() / std::max(denom, 1e-300);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> peig(P);
    cert.min_eigenvalue = peig.eigenvalues().minCoeff();

    const double p_scale = P.cwiseAbs().maxCoeff();
    if (cert.min_eigenvalue < -1e-10 * std::max(p_scale, 1e-300)) {
        std::ostringstream os;
        os << "min eigenvalue " << cert.min_eigenvalue << " vs scale " << p_scale;
        return fail(RiccatiFailure::Indefinite, os.str(), marginal);
    }
    if (!cert.stable)
        return fail(RiccatiFailure::NotStabilizing,
                    "closed matrix spectral abscissa >= 0", marginal);
    if (cert.residual_norm > kMaxResidual) {
        std::ostringstream os;
        os << "relative residual " << cert.residual_norm;
        return fail(RiccatiFailure::LargeResidual, os.str(), marginal);
    }

    RiccatiOutcome out;
    out.certificate = std::move(cert);
    out.marginal = marginal;
    return out;
}

RiccatiOutcome solve_dual_riccati(const Eigen::MatrixXd& A,
                                  const Eigen::MatrixXd& B1,
                                  const Eigen::MatrixXd& C1,
                                  const Eigen::MatrixXd& C2, double gamma,
                                  SubspaceRoute route) {
    RiccatiOutcome out = solve_game_riccati(A.transpose(), C1.transpose(),
                                            C2.transpose(), B1.transpose(), gamma,
                                            route);
    if (out.certificate) {
        out.certificate->P = out.certificate->P.transpose().eval();
        out.certificate->closed_matrix = out.certificate->closed_matrix.transpose().eval();
    }
    return out;
}

namespace {

bool pbh_full_rank(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    const Eigen::Index n = A.rows();
    Eigen::EigenSolver<Eigen::MatrixXd> eig(A, false);
    for (Eigen::Index i = 0; i < n; ++i) {
        const std::complex<double> lam = eig.eigenvalues()(i);
        if (lam.real() < -1e-9 * std::max(1.0, std::abs(lam)))
            continue;  // only unstable/axis modes matter
        Eigen::MatrixXcd M(n, n + B.cols());
        M << A.cast<std::complex<double>>() -
                 lam * Eigen::MatrixXcd::Identity(n, n),
            B.cast<std::complex<double>>();
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
        const double smin = svd.singularValues()(n - 1);
        const double smax = svd.singularValues()(0);
        if (smin < 1e-10 * std::max(smax, 1.0))
            return false;
    }
    return true;
}

} // namespace

bool stabilizable(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    return pbh_full_rank(A, B);
}

bool detectable(const Eigen::MatrixXd& C, const Eigen::MatrixXd& A) {
    return pbh_full_rank(A.transpose(), C.transpose());
}

} // namespace aoctrl

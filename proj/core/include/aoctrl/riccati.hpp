#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

namespace aoctrl {

/// A stabilizing solution of a game-type Riccati equation together with the
/// evidence that it is one.
struct RiccatiCertificate {
    Eigen::MatrixXd P;              // symmetric PSD
    Eigen::MatrixXd closed_matrix;  // A + (g^-2 B1 B1' - B2 B2') P (or dual)
    double residual_norm = 0.0;     // relative Frobenius residual
    bool stable = false;            // spectral abscissa of closed_matrix < 0
    double min_eigenvalue = 0.0;    // smallest eigenvalue of P
    double subspace_condition = 0.0;
};

enum class RiccatiFailure {
    None,
    AxisEigenvalues,    // Hamiltonian eigenvalues within tolerance of jR
    WrongInertia,       // stable invariant subspace is not n-dimensional
    IllConditioned,     // subspace basis condition > 1e10
    Indefinite,         // P has eigenvalues below -1e-10 ||P||
    NotStabilizing,     // closed matrix has nonnegative spectral abscissa
    LargeResidual,      // substitution residual above 1e-8
    SchurFailure,       // LAPACK reordering failed
};

const char* to_string(RiccatiFailure f);

struct RiccatiOutcome {
    std::optional<RiccatiCertificate> certificate;
    RiccatiFailure failure = RiccatiFailure::None;
    bool marginal = false;  // axis distance within 10x of the tolerance
    std::string detail;

    bool feasible() const { return certificate.has_value(); }
};

/// Independent algorithmic routes to the stable invariant subspace, used by
/// the uniqueness cross-check.
enum class SubspaceRoute { OrderedSchur, Eigenvectors };

/// Stabilizing solution of
///   A'P + PA + P (gamma^-2 B1 B1' - B2 B2') P + C1'C1 = 0
/// via the stable invariant subspace of the 2n x 2n Hamiltonian.
RiccatiOutcome solve_game_riccati(const Eigen::MatrixXd& A,
                                  const Eigen::MatrixXd& B1,
                                  const Eigen::MatrixXd& B2,
                                  const Eigen::MatrixXd& C1, double gamma,
                                  SubspaceRoute route = SubspaceRoute::OrderedSchur);

/// Stabilizing solution of the dual equation
///   A Q + Q A' + Q (gamma^-2 C1'C1 - C2'C2) Q + B1 B1' = 0,
/// by transpose duality: the primal solve on (A', C1', C2', B1').
RiccatiOutcome solve_dual_riccati(const Eigen::MatrixXd& A,
                                  const Eigen::MatrixXd& B1,
                                  const Eigen::MatrixXd& C1,
                                  const Eigen::MatrixXd& C2, double gamma,
                                  SubspaceRoute route = SubspaceRoute::OrderedSchur);

/// PBH rank tests at the unstable eigenvalues.
bool stabilizable(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);
bool detectable(const Eigen::MatrixXd& C, const Eigen::MatrixXd& A);

/// Spectral abscissa max Re(eig(A)).
double spectral_abscissa(const Eigen::MatrixXd& A);

} // namespace aoctrl

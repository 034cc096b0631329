#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "aoctrl/plant.hpp"
#include "aoctrl/riccati.hpp"

namespace aoctrl {

/// Dynamic output-feedback controller p' = M p + N y, u = L p + R y.
/// Central synthesis always yields R = 0.
struct HinfController {
    Eigen::MatrixXd M, N, L, R;
    double gamma = 0.0;
    RiccatiCertificate cert_p, cert_q;
    double rho_pq = 0.0;

    int order() const { return static_cast<int>(M.rows()); }
};

struct CouplingCheck {
    double rho = 0.0;
    bool ok = false;
};

/// Spectral-radius coupling test rho(P Q) < gamma^2 with a strictness margin.
CouplingCheck coupling_check(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q,
                             double gamma);

/// Central controller from the two certificates:
///   M = A + (g^-2 B1 B1' - B2 B2') P - Q (I - g^-2 P Q)^-1 C2~' C2~
///   N = -Q (I - g^-2 P Q)^-1 C2~' S,   L = B2' P,   R = 0
/// where S = (D21 D21')^(-1/2) and C2~ = S C2 normalize the measurement
/// channels.  Verifies internal stability of the loop before returning.
HinfController central_controller(const StandardPlant& plant,
                                  const Eigen::MatrixXd& P,
                                  const Eigen::MatrixXd& Q, double gamma);

/// One fixed-gamma synthesis attempt with per-condition diagnostics.
struct SynthesisAttempt {
    std::optional<HinfController> controller;
    RiccatiOutcome riccati_p;
    RiccatiOutcome riccati_q;
    CouplingCheck coupling;
    std::string failure;  // empty on success

    bool feasible() const { return controller.has_value(); }
};
SynthesisAttempt synthesize(const StandardPlant& plant, double gamma);

/// Bisection on joint feasibility of the three conditions.  gamma_hi is
/// doubled up to `cap` until feasible; then the interval shrinks to
/// relative tol.  Throws NumericalError when infeasible at the cap, with
/// the per-condition diagnostics of the last attempt in the message.
struct GammaSearchResult {
    double gamma = 0.0;
    HinfController controller;
    int bisection_steps = 0;
    double gamma_lo = 0.0;  // largest gamma that failed
};
GammaSearchResult gamma_bisect(const StandardPlant& plant, double gamma_lo,
                               double gamma_hi, double tol = 1e-3,
                               double cap = 1e9);

/// Closed-loop matrices of the plant/controller interconnection
/// (w -> z map): x_cl = (x, p).
struct ClosedLoop {
    Eigen::MatrixXd A, B, C;  // D = 0 since R = 0 and D11 = 0
};
ClosedLoop close_loop(const StandardPlant& plant, const HinfController& K);

/// L2-gain of the stable closed loop by bisection on imaginary-axis
/// eigenvalues of the associated Hamiltonian; relative tolerance `tol`.
double closed_loop_hinf_norm(const StandardPlant& plant, const HinfController& K,
                             double tol = 1e-4);

/// Norm of an explicit stable (A, B, C, D) realization; n = 0 reduces to
/// sigma_max(D).
double l2_gain(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
               const Eigen::MatrixXd& C, const Eigen::MatrixXd& D = {},
               double tol = 1e-4);

/// Bounded-real certificate at a single gain level: true iff the gain of the
/// stable realization is strictly below `gamma` (no imaginary-axis
/// eigenvalues of the test Hamiltonian).  Sharper than comparing against the
/// bisected estimate when the gain sits close to gamma.
bool l2_gain_below(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                   const Eigen::MatrixXd& C, const Eigen::MatrixXd& D,
                   double gamma);

/// The same certificate for the plant/controller closed loop.
bool closed_loop_gain_below(const StandardPlant& plant, const HinfController& K,
                            double gamma);

/// Plant with states x^ = T^-1 x; y, u, w, z unchanged.
StandardPlant apply_state_scaling(const StandardPlant& plant,
                                  const Eigen::VectorXd& T);

} // namespace aoctrl

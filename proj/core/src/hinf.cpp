#include "aoctrl/hinf.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "aoctrl/errors.hpp"

namespace aoctrl {

namespace {

// The central-controller formulas assume unit-intensity measurement noise; the
// diagonal scaling S = (D21 D21')^(-1/2) brings the plant to that form.
Eigen::VectorXd measurement_scaling(const StandardPlant& p) {
    const Eigen::MatrixXd DD = p.D21 * p.D21.transpose();
    const Eigen::Index ny = DD.rows();
    Eigen::MatrixXd off = DD;
    off.diagonal().setZero();
    if (off.cwiseAbs().maxCoeff() > 1e-12 * std::max(DD.cwiseAbs().maxCoeff(), 1e-300))
        throw NumericalError("hinf: D21 D21' is not diagonal; unsupported noise structure");
    Eigen::VectorXd s(ny);
    for (Eigen::Index i = 0; i < ny; ++i) {
        if (!(DD(i, i) > 0.0))
            throw NumericalError(
                "hinf: a measured channel carries no noise (D21 D21' singular); "
                "the synthesis problem is not regular");
        s(i) = 1.0 / std::sqrt(DD(i, i));
    }
    return s;
}

void assert_regular_structure(const StandardPlant& p) {
    const double c1_scale = std::max(p.C1.cwiseAbs().maxCoeff(), 1e-300);
    if ((p.D12.transpose() * p.C1).cwiseAbs().maxCoeff() > 1e-9 * c1_scale)
        throw NumericalError("hinf: D12' C1 != 0; cross-weighting is unsupported");
    const double b1_scale = std::max(p.B1.cwiseAbs().maxCoeff(), 1e-300);
    if ((p.B1 * p.D21.transpose()).cwiseAbs().maxCoeff() > 1e-9 * b1_scale)
        throw NumericalError("hinf: B1 D21' != 0; correlated plant/measurement "
                             "noise is unsupported");
    const Eigen::MatrixXd DtD = p.D12.transpose() * p.D12;
    if ((DtD - Eigen::MatrixXd::Identity(DtD.rows(), DtD.cols())).cwiseAbs().maxCoeff() > 1e-12)
        throw NumericalError("hinf: D12' D12 != I; control weighting must be the "
                             "identity stack");
}

} // namespace

StandardPlant apply_state_scaling(const StandardPlant& plant,
                                  const Eigen::VectorXd& T) {
    if (T.size() != plant.dims.n_x)
        throw std::invalid_argument("apply_state_scaling: wrong scaling size");
    StandardPlant p = plant;
    const Eigen::VectorXd Ti = T.cwiseInverse();
    p.A = Ti.asDiagonal() * plant.A * T.asDiagonal();
    p.B1 = Ti.asDiagonal() * plant.B1;
    p.B2 = Ti.asDiagonal() * plant.B2;
    p.C1 = plant.C1 * T.asDiagonal();
    p.C2 = plant.C2 * T.asDiagonal();
    p.state_scaling = Eigen::VectorXd::Ones(plant.dims.n_x);
    return p;
}

CouplingCheck coupling_check(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q,
                             double gamma) {
    CouplingCheck out;
    Eigen::EigenSolver<Eigen::MatrixXd> eig(P * Q, false);
    out.rho = eig.eigenvalues().cwiseAbs().maxCoeff();
    out.ok = out.rho < gamma * gamma * (1.0 - 1e-9);
    return out;
}

HinfController central_controller(const StandardPlant& plant,
                                  const Eigen::MatrixXd& P,
                                  const Eigen::MatrixXd& Q, double gamma) {
    const Eigen::Index n = plant.A.rows();
    const double g2inv = 1.0 / (gamma * gamma);

    const Eigen::VectorXd s = measurement_scaling(plant);
    const Eigen::MatrixXd C2n = s.asDiagonal() * plant.C2;

    Eigen::MatrixXd Mi = Eigen::MatrixXd::Identity(n, n) - g2inv * (P * Q);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(Mi);
    {
        // coupling margin: (I - g^-2 P Q) must be comfortably invertible
        const double det_scale = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
        if (!(det_scale > 1e-14))
            throw NumericalError("central_controller: (I - gamma^-2 P Q) is singular; "
                                 "coupling margin violated");
    }

    HinfController K;
    K.gamma = gamma;
    const Eigen::MatrixXd R = g2inv * (plant.B1 * plant.B1.transpose()) -
                              plant.B2 * plant.B2.transpose();
    // M = A + (g^-2 B1 B1' - B2 B2') P - Q (I - g^-2 P Q)^-1 C2~' C2~
    K.M = plant.A + R * P - Q * lu.solve(C2n.transpose() * C2n);
    // N = -Q (I - g^-2 P Q)^-1 C2~' S  (acts on the raw measurement)
    K.N = -Q * lu.solve(C2n.transpose() * s.asDiagonal().toDenseMatrix());
    K.L = plant.B2.transpose() * P;
    K.R = Eigen::MatrixXd::Zero(plant.dims.n_u, plant.dims.n_y);

    // internal stability of the interconnection
    const Eigen::Index np = K.M.rows();
    Eigen::MatrixXd Acl(n + np, n + np);
    Acl << plant.A, plant.B2 * K.L, K.N * plant.C2, K.M;
    const double sa = spectral_abscissa(Acl);
    if (!(sa < 0.0)) {
        std::ostringstream os;
        os << "central_controller: closed loop unstable (spectral abscissa " << sa
           << "); controller orientation or certificates are inconsistent";
        throw NumericalError(os.str());
    }
    return K;
}

SynthesisAttempt synthesize(const StandardPlant& plant, double gamma) {
    assert_regular_structure(plant);

    StandardPlant p = plant;
    if (plant.state_scaling.size() == plant.dims.n_x &&
        (plant.state_scaling.array() != 1.0).any())
        p = apply_state_scaling(plant, plant.state_scaling);

    const Eigen::VectorXd s = measurement_scaling(p);
    const Eigen::MatrixXd C2n = s.asDiagonal() * p.C2;

    SynthesisAttempt at;
    at.riccati_p = solve_game_riccati(p.A, p.B1, p.B2, p.C1, gamma);
    if (!at.riccati_p.feasible()) {
        at.failure = std::string("condition (i): ") + to_string(at.riccati_p.failure) +
                     " [" + at.riccati_p.detail + "]";
        return at;
    }
    at.riccati_q = solve_dual_riccati(p.A, p.B1, p.C1, C2n, gamma);
    if (!at.riccati_q.feasible()) {
        at.failure = std::string("condition (ii): ") + to_string(at.riccati_q.failure) +
                     " [" + at.riccati_q.detail + "]";
        return at;
    }
    at.coupling = coupling_check(at.riccati_p.certificate->P,
                                 at.riccati_q.certificate->P, gamma);
    if (!at.coupling.ok) {
        std::ostringstream os;
        os << "condition (iii): rho(PQ) = " << at.coupling.rho
           << " not < gamma^2 = " << gamma * gamma;
        at.failure = os.str();
        return at;
    }

    try {
        HinfController K = central_controller(p, at.riccati_p.certificate->P,
                                              at.riccati_q.certificate->P, gamma);
        K.cert_p = *at.riccati_p.certificate;
        K.cert_q = *at.riccati_q.certificate;
        K.rho_pq = at.coupling.rho;
        at.controller = std::move(K);
    } catch (const NumericalError& e) {
        at.failure = e.what();
    }
    return at;
}

GammaSearchResult gamma_bisect(const StandardPlant& plant, double gamma_lo,
                               double gamma_hi, double tol, double cap) {
    if (!(gamma_lo >= 0.0) || !(gamma_hi > gamma_lo))
        throw std::invalid_argument("gamma_bisect: need 0 <= gamma_lo < gamma_hi");
    if (!(tol > 0.0))
        throw std::invalid_argument("gamma_bisect: tol must be positive");

    double hi = gamma_hi;
    SynthesisAttempt at = synthesize(plant, hi);
    while (!at.feasible() && hi < cap) {
        hi = std::min(2.0 * hi, cap);
        at = synthesize(plant, hi);
    }
    if (!at.feasible())
        throw NumericalError("gamma_bisect: infeasible at cap gamma = " +
                             std::to_string(hi) + "; last diagnostics: " + at.failure);

    GammaSearchResult res;
    res.controller = *at.controller;
    res.gamma = hi;
    double lo = gamma_lo;
    int steps = 0;
    while ((hi - lo) > tol * hi) {
        const double mid = 0.5 * (lo + hi);
        ++steps;
        SynthesisAttempt mat = synthesize(plant, mid);
        if (mat.feasible()) {
            hi = mid;
            res.controller = *mat.controller;
            res.gamma = mid;
        } else {
            lo = mid;
        }
    }
    res.bisection_steps = steps;
    res.gamma_lo = lo;
    return res;
}

ClosedLoop close_loop(const StandardPlant& plant, const HinfController& K) {
    StandardPlant p = plant;
    if (plant.state_scaling.size() == plant.dims.n_x &&
        (plant.state_scaling.array() != 1.0).any())
        p = apply_state_scaling(plant, plant.state_scaling);

    const Eigen::Index n = p.A.rows();
    const Eigen::Index np = K.M.rows();
    if (np > 0 && (K.N.cols() != p.C2.rows() || K.L.rows() != p.B2.cols()))
        throw std::invalid_argument("close_loop: controller dimensions mismatch");
    if (K.R.size() > 0 && K.R.cwiseAbs().maxCoeff() != 0.0)
        throw std::invalid_argument("close_loop: only R = 0 controllers are supported");

    ClosedLoop cl;
    cl.A.resize(n + np, n + np);
    cl.B.resize(n + np, p.dims.n_w);
    cl.C.resize(p.dims.n_z, n + np);
    if (np > 0) {
        cl.A << p.A, p.B2 * K.L, K.N * p.C2, K.M;
        cl.B << p.B1, K.N * p.D21;
        cl.C << p.C1, p.D12 * K.L;
    } else {
        cl.A = p.A;
        cl.B = p.B1;
        cl.C = p.C1;
    }
    return cl;
}

namespace {

double static_gain(const Eigen::MatrixXd& D) {
    if (D.size() == 0)
        return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(D);
    return svd.singularValues()(0);
}

bool hamiltonian_touches_axis(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                              const Eigen::MatrixXd& C, const Eigen::MatrixXd& D,
                              double gamma) {
    const Eigen::Index n = A.rows();
    const Eigen::Index m = B.cols();
    Eigen::MatrixXd H(2 * n, 2 * n);
    if (D.size() == 0 || D.cwiseAbs().maxCoeff() == 0.0) {
        H << A, (B * B.transpose()) / (gamma * gamma), -C.transpose() * C,
            -A.transpose();
    } else {
        const Eigen::MatrixXd R =
            gamma * gamma * Eigen::MatrixXd::Identity(m, m) - D.transpose() * D;
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(R);
        const Eigen::MatrixXd Rinv_Bt = lu.solve(B.transpose());
        const Eigen::MatrixXd Rinv_DtC = lu.solve(D.transpose() * C);
        const Eigen::MatrixXd Abar = A + B * Rinv_DtC;
        H << Abar, B * Rinv_Bt,
            -C.transpose() * (C + D * Rinv_DtC), -Abar.transpose();
    }
    Eigen::EigenSolver<Eigen::MatrixXd> eig(H, false);
    for (Eigen::Index i = 0; i < 2 * n; ++i) {
        const auto lam = eig.eigenvalues()(i);
        if (std::abs(lam.real()) < 1e-9 * std::max(1.0, std::abs(lam)))
            return true;
    }
    return false;
}

} // namespace

double l2_gain(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
               const Eigen::MatrixXd& C, const Eigen::MatrixXd& D, double tol) {
    const Eigen::Index n = A.rows();
    if (n == 0)
        return static_gain(D);
    if (!(spectral_abscissa(A) < 0.0))
        throw NumericalError("l2_gain: system is not stable");

    // lower bound from a frequency probe at 0 and near the resonances
    Eigen::EigenSolver<Eigen::MatrixXd> eig(A, false);
    std::vector<double> freqs{0.0};
    for (Eigen::Index i = 0; i < n; ++i) {
        const double w = std::abs(eig.eigenvalues()(i).imag());
        if (w > 0.0) {
            freqs.push_back(w);
            freqs.push_back(1.05 * w);
            freqs.push_back(0.95 * w);
        }
        freqs.push_back(std::abs(eig.eigenvalues()(i)));
    }
    double lo = static_gain(D);
    for (double w : freqs) {
        Eigen::MatrixXcd res =
            C.cast<std::complex<double>>() *
            (std::complex<double>(0.0, w) * Eigen::MatrixXcd::Identity(n, n) -
             A.cast<std::complex<double>>())
                .partialPivLu()
                .solve(B.cast<std::complex<double>>());
        if (D.size() > 0)
            res += D.cast<std::complex<double>>();
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(res);
        lo = std::max(lo, svd.singularValues()(0));
    }
    if (lo == 0.0)
        return 0.0;

    double hi = 2.0 * lo;
    int guard = 0;
    while (hamiltonian_touches_axis(A, B, C, D, hi) && guard++ < 60)
        hi *= 2.0;
    double lo2 = lo * (1.0 + 1e-12);
    if (hamiltonian_touches_axis(A, B, C, D, lo2))
        lo2 = lo * 0.5;
    while ((hi - lo2) > tol * hi) {
        const double mid = 0.5 * (hi + lo2);
        if (hamiltonian_touches_axis(A, B, C, D, mid))
            lo2 = mid;
        else
            hi = mid;
    }
    return 0.5 * (hi + lo2);
}

double closed_loop_hinf_norm(const StandardPlant& plant, const HinfController& K,
                             double tol) {
    const ClosedLoop cl = close_loop(plant, K);
    return l2_gain(cl.A, cl.B, cl.C, Eigen::MatrixXd(), tol);
}

bool l2_gain_below(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                   const Eigen::MatrixXd& C, const Eigen::MatrixXd& D,
                   double gamma) {
    if (!(gamma > 0.0))
        return false;
    if (A.rows() == 0)
        return static_gain(D) < gamma;
    if (!(spectral_abscissa(A) < 0.0))
        throw NumericalError("l2_gain_below: system is not stable");
    if (static_gain(D) >= gamma)
        return false;
    return !hamiltonian_touches_axis(A, B, C, D, gamma);
}

bool closed_loop_gain_below(const StandardPlant& plant, const HinfController& K,
                            double gamma) {
    const ClosedLoop cl = close_loop(plant, K);
    return l2_gain_below(cl.A, cl.B, cl.C, Eigen::MatrixXd(), gamma);
}

} // namespace aoctrl

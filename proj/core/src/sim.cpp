#include "aoctrl/sim.hpp"

#include <cmath>
#include <sstream>

#include "aoctrl/discretize.hpp"
#include "aoctrl/errors.hpp"
#include "aoctrl/lyapunov.hpp"
#include "aoctrl/rng.hpp"

namespace aoctrl {

namespace {

struct LoopSetup {
    ClosedLoop cl;
    Eigen::MatrixXd C_res;  // residual-phase coefficients from x_cl
    Eigen::MatrixXd C_u;    // control vector from x_cl
    Eigen::MatrixXd gram;
    int nb, nz, n, np;
};

LoopSetup make_setup(const StandardPlant& plant, const HinfController& K) {
    LoopSetup s;
    s.nb = plant.dims.n_basis;
    s.nz = plant.dims.n_zernike;
    s.n = plant.dims.n_x;
    s.np = K.order();
    s.cl = close_loop(plant, K);

    // close_loop works in scaled coordinates; rebuild the matching C1 rows.
    StandardPlant p = plant;
    if (plant.state_scaling.size() == plant.dims.n_x &&
        (plant.state_scaling.array() != 1.0).any())
        p = apply_state_scaling(plant, plant.state_scaling);

    const int ncl = s.n + s.np;
    s.C_res = Eigen::MatrixXd::Zero(s.nb, ncl);
    s.C_res.leftCols(s.n) = p.C1.topRows(s.nb);
    s.C_u = Eigen::MatrixXd::Zero(plant.dims.n_u, ncl);
    if (s.np > 0)
        s.C_u.rightCols(s.np) = K.L;

    s.gram = plant.gram.size() > 0
                 ? plant.gram
                 : Eigen::MatrixXd::Identity(s.nb, s.nb).eval();
    return s;
}

} // namespace

HinfController no_controller(const StandardPlant& plant) {
    HinfController K;
    K.M.resize(0, 0);
    K.N.resize(0, plant.dims.n_y);
    K.L.resize(plant.dims.n_u, 0);
    K.R = Eigen::MatrixXd::Zero(plant.dims.n_u, plant.dims.n_y);
    return K;
}

SimResult run_closed_loop(const StandardPlant& plant, const HinfController& K,
                          const TurbulenceModel& turb, double dt,
                          double duration, std::uint64_t seed, double burn_in) {
    if (!(dt > 0.0))
        throw std::invalid_argument("run_closed_loop: dt must be positive");
    if (!(burn_in < duration))
        throw std::invalid_argument("run_closed_loop: burn_in must be below duration");
    if (turb.size() != plant.dims.n_zernike)
        throw std::invalid_argument("run_closed_loop: turbulence model size mismatch");

    LoopSetup s = make_setup(plant, K);
    // reject growth; the marginally stable uncontrolled plate is allowed
    const double sa = spectral_abscissa(s.cl.A);
    const double sa_tol =
        1e-9 * std::max(1.0, s.cl.A.cwiseAbs().maxCoeff());
    if (sa > sa_tol) {
        std::ostringstream os;
        os << "run_closed_loop: closed loop unstable (spectral abscissa " << sa << ")";
        throw NumericalError(os.str());
    }

    const DiscretizedNoise dn =
        exact_discretize_noise(s.cl.A, s.cl.B * s.cl.B.transpose(), dt);
    const Eigen::MatrixXd Lnoise = symmetric_sqrt(dn.cov);
    const Eigen::MatrixXd Linit = symmetric_sqrt(turb.P_inf);

    const int steps = static_cast<int>(std::llround(duration / dt));
    const int burn = static_cast<int>(std::llround(burn_in / dt));
    const int ncl = s.n + s.np;
    const int kept = steps - burn;

    GaussianSampler rng(seed);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(ncl);
    x.segment(2 * s.nb, s.nz) = Linit * rng.vector(s.nz);

    SimResult res;
    res.seed = seed;
    res.t.resize(kept);
    res.phi_tur_norm.resize(kept);
    res.phi_res_norm.resize(kept);
    res.phi_res_rss.resize(kept);
    res.u_norm.resize(kept);

    double sum_tur = 0.0, sum_res = 0.0;
    double comp_tur = 0.0, comp_res = 0.0;  // Neumaier compensation
    auto add = [](double& sum, double& comp, double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    };

    int out = 0;
    for (int k = 0; k < steps; ++k) {
        if (k > 0)
            x = dn.Ad * x + Lnoise * rng.vector(ncl);
        if (!x.allFinite()) {
            std::ostringstream os;
            os << "run_closed_loop: non-finite state at step " << k;
            throw NumericalError(os.str());
        }
        if (k < burn)
            continue;
        const Eigen::VectorXd phi = x.segment(2 * s.nb, s.nz);
        const Eigen::VectorXd v = s.C_res * x;
        const Eigen::VectorXd u = s.C_u * x;
        const double ntur = phi.norm();
        const double nres = std::sqrt(std::max(0.0, v.dot(s.gram * v)));
        res.t(out) = k * dt;
        res.phi_tur_norm(out) = ntur;
        res.phi_res_norm(out) = nres;
        res.phi_res_rss(out) = v.norm();
        res.u_norm(out) = u.norm();
        add(sum_tur, comp_tur, ntur);
        add(sum_res, comp_res, nres);
        ++out;
    }
    const double mean_tur = (sum_tur + comp_tur) / kept;
    const double mean_res = (sum_res + comp_res) / kept;
    res.attenuation_ratio = mean_tur / mean_res;
    return res;
}

MonteCarloResult monte_carlo(const StandardPlant& plant, const HinfController& K,
                             const TurbulenceModel& turb, int runs, double dt,
                             double duration, std::uint64_t base_seed,
                             double burn_in) {
    if (runs < 1)
        throw std::invalid_argument("monte_carlo: runs must be >= 1");
    MonteCarloResult mc;
    for (int k = 0; k < runs; ++k) {
        const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(k);
        try {
            const SimResult r = run_closed_loop(plant, K, turb, dt, duration, seed, burn_in);
            mc.seeds.push_back(seed);
            mc.ratios.push_back(r.attenuation_ratio);
        } catch (const std::exception& e) {
            mc.failures.push_back("seed " + std::to_string(seed) + ": " + e.what());
        }
    }
    const int n = static_cast<int>(mc.ratios.size());
    if (n > 0) {
        double sum = 0.0, comp = 0.0;
        for (double r : mc.ratios) {
            const double t = sum + r;
            if (std::abs(sum) >= std::abs(r))
                comp += (sum - t) + r;
            else
                comp += (r - t) + sum;
            sum = t;
        }
        mc.mean_ratio = (sum + comp) / n;
        if (n > 1) {
            double var = 0.0;
            for (double r : mc.ratios)
                var += (r - mc.mean_ratio) * (r - mc.mean_ratio);
            var /= (n - 1);
            mc.stderr_ratio = std::sqrt(var / n);
        }
    }
    return mc;
}

SteadyStateVariance steady_state_variance(const StandardPlant& plant,
                                          const HinfController& K) {
    LoopSetup s = make_setup(plant, K);
    if (!(spectral_abscissa(s.cl.A) < 0.0))
        throw NumericalError("steady_state_variance: closed loop unstable");

    SteadyStateVariance out;
    out.state_cov = solve_continuous_lyapunov(s.cl.A, s.cl.B * s.cl.B.transpose());
    out.phi_cov = out.state_cov.block(2 * s.nb, 2 * s.nb, s.nz, s.nz);
    out.mean_sq_phi_tur = out.phi_cov.trace();
    out.mean_sq_phi_res =
        (s.gram * (s.C_res * out.state_cov * s.C_res.transpose())).trace();
    out.mean_sq_u = (s.C_u * out.state_cov * s.C_u.transpose()).trace();
    return out;
}

} // namespace aoctrl

#include "aoctrl/plate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "aoctrl/errors.hpp"
#include "aoctrl/quadrature.hpp"

namespace aoctrl {

namespace {

constexpr double kScanLo = 0.5;
constexpr double kScanHi = 12.0;
constexpr int kRadialNodes = 96;

double bessel_j(int k, double x) { return std::cyl_bessel_j(double(k), x); }
double bessel_i(int k, double x) { return std::cyl_bessel_i(double(k), x); }

double bessel_j_prime(int k, double x) {
    if (k == 0)
        return -bessel_j(1, x);
    return bessel_j(k - 1, x) - (k / x) * bessel_j(k, x);
}

double bessel_i_prime(int k, double x) {
    if (k == 0)
        return bessel_i(1, x);
    return bessel_i(k - 1, x) - (k / x) * bessel_i(k, x);
}

struct BcTerms {
    double t1j, t1i, t2j, t2i;
};

// Free-edge conditions imposed on R(rho) = J_k(lam rho) + c I_k(lam rho),
// written at rho = 1 and multiplied by a^2 resp. a^3:
//   moment:  Lap_k R - (1 - nu)(R'/rho - k^2 R / rho^2) = 0
//   shear :  (Lap_k R)' - (1 - nu) k^2 (R/rho)' / rho = 0
// with Lap_k J = -lam^2 J and Lap_k I = +lam^2 I.
BcTerms bc_terms(int k, double lam, double nu) {
    const double J = bessel_j(k, lam), I = bessel_i(k, lam);
    const double Jd = bessel_j_prime(k, lam), Id = bessel_i_prime(k, lam);
    const double k2 = double(k) * double(k);
    BcTerms t;
    t.t1j = -lam * lam * J - (1.0 - nu) * (lam * Jd - k2 * J);
    t.t1i = +lam * lam * I - (1.0 - nu) * (lam * Id - k2 * I);
    t.t2j = -lam * lam * lam * Jd - (1.0 - nu) * k2 * (lam * Jd - J);
    t.t2i = +lam * lam * lam * Id - (1.0 - nu) * k2 * (lam * Id - I);
    return t;
}

double char_det(int k, double lam, double nu) {
    const BcTerms t = bc_terms(k, lam, nu);
    // normalize against the I_k growth so sign changes stay detectable
    const double scale = std::max({std::abs(t.t1i), std::abs(t.t2i), 1.0});
    return (t.t1j * t.t2i - t.t1i * t.t2j) / scale;
}

double polish_root(int k, double nu, double lo, double hi) {
    double flo = char_det(k, lo, nu);
    double fhi = char_det(k, hi, nu);
    if (flo == 0.0)
        return lo;
    if (fhi == 0.0)
        return hi;
    if (flo * fhi > 0.0) {
        std::ostringstream os;
        os << "plate mode root: no sign change in bracket [" << lo << ", " << hi
           << "] for k=" << k;
        throw NumericalError(os.str());
    }
    // bisection to a tight interval
    for (int it = 0; it < 80 && (hi - lo) > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = char_det(k, mid, nu);
        if (fm == 0.0)
            return mid;
        if (flo * fm < 0.0) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    // secant polish to 1e-12 absolute
    double x0 = lo, x1 = hi, f0 = flo, f1 = fhi;
    for (int it = 0; it < 50; ++it) {
        const double denom = f1 - f0;
        if (denom == 0.0)
            break;
        const double x2 = x1 - f1 * (x1 - x0) / denom;
        if (!(x2 > kScanLo && x2 < kScanHi))
            break;
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = char_det(k, x1, nu);
        if (std::abs(x1 - x0) < 1e-12)
            break;
    }
    return x1;
}

double mixing_coefficient(int k, double lam, double nu) {
    const BcTerms t = bc_terms(k, lam, nu);
    return -t.t1j / t.t1i;
}

double radial_value(int k, double lam, double c, double rho) {
    return bessel_j(k, lam * rho) + c * bessel_i(k, lam * rho);
}

// 1 / sqrt(norm^2 under (1/pi) rho drho dtheta on the unit disk)
double normalization(int k, double lam, double c, const QuadratureRule& rule) {
    double radial = 0.0;
    for (Eigen::Index q = 0; q < rule.nodes.size(); ++q) {
        const double rho = rule.nodes(q);
        const double v = radial_value(k, lam, c, rho);
        radial += rule.weights(q) * v * v * rho;
    }
    const double angular_over_pi = (k == 0) ? 2.0 : 1.0;
    return 1.0 / std::sqrt(angular_over_pi * radial);
}

const QuadratureRule& radial_rule() {
    static const QuadratureRule rule = gauss_legendre(kRadialNodes);
    return rule;
}

double angular_overlap(int k1, Parity p1, int k2, Parity p2) {
    // int trig(k1 t) trig(k2 t) dt / pi; RadialOnly plate modes are k=0 cosine
    if (k1 != k2 || p1 != p2)
        return 0.0;
    return (k1 == 0) ? 2.0 : 1.0;
}

} // namespace

void PhysicalParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw ConfigError(std::string(name) + " must be positive and finite");
    };
    positive(rho, "rho");
    positive(q1, "q1");
    positive(q2, "q2");
    positive(radius, "radius");
    positive(wavelength, "wavelength");
    positive(wind_speed, "wind_speed");
    positive(pupil_diameter, "pupil_diameter");
    if (!(nu > 0.0) || !(nu < 0.5))
        throw ConfigError("nu must lie in (0, 0.5)");
    for (double w : {b_weight, c_weight, d_weight})
        if (!(w >= 0.0) || !std::isfinite(w))
            throw ConfigError("disturbance weights must be nonnegative and finite");
    if (!std::isfinite(d31) || !std::isfinite(e31))
        throw ConfigError("piezo coefficients must be finite");
}

std::vector<PlateShape> solve_mode_shapes(const PhysicalParams& params,
                                          int k_max, int count,
                                          double scan_step) {
    if (count < 1)
        throw std::invalid_argument("solve_mode_shapes: count must be >= 1");
    if (k_max < 0)
        throw std::invalid_argument("solve_mode_shapes: k_max must be >= 0");
    if (!(params.nu > 0.0 && params.nu < 0.5))
        throw std::invalid_argument("solve_mode_shapes: nu outside (0, 0.5)");

    const double nu = params.nu;
    std::vector<PlateShape> shapes;
    for (int k = 0; k <= k_max; ++k) {
        int rank = 0;
        double prev = kScanLo;
        double fprev = char_det(k, prev, nu);
        for (double x = kScanLo + scan_step; x <= kScanHi + 1e-12; x += scan_step) {
            const double f = char_det(k, x, nu);
            if (fprev == 0.0 || fprev * f < 0.0) {
                PlateShape s;
                s.k = k;
                s.j = rank++;
                s.lambda = polish_root(k, nu, prev, x);
                s.c = mixing_coefficient(k, s.lambda, nu);
                s.a_norm = normalization(k, s.lambda, s.c, radial_rule());
                const double beta = s.lambda / params.radius;
                s.omega_sq = (params.q1 / params.rho) * beta * beta * beta * beta +
                             params.q2 / params.rho;
                shapes.push_back(s);
            }
            prev = x;
            fprev = f;
        }
    }
    std::sort(shapes.begin(), shapes.end(),
              [](const PlateShape& a, const PlateShape& b) { return a.lambda < b.lambda; });
    if (static_cast<int>(shapes.size()) < count) {
        std::ostringstream os;
        os << "solve_mode_shapes: requested " << count << " shapes but only "
           << shapes.size() << " roots located in (" << kScanLo << ", " << kScanHi
           << "] for k <= " << k_max;
        throw NumericalError(os.str());
    }
    shapes.resize(static_cast<std::size_t>(count));
    return shapes;
}

std::vector<PlateMode> expand_basis(const std::vector<PlateShape>& shapes) {
    for (std::size_t i = 1; i < shapes.size(); ++i)
        if (shapes[i - 1].lambda > shapes[i].lambda)
            throw std::invalid_argument("expand_basis: shapes must be lambda-sorted");
    std::vector<PlateMode> basis;
    for (const PlateShape& s : shapes) {
        basis.push_back(PlateMode{s, Parity::Cosine});
        if (s.k >= 1)
            basis.push_back(PlateMode{s, Parity::Sine});
    }
    return basis;
}

double mode_radial(const PlateMode& mode, double rho) {
    const PlateShape& s = mode.shape;
    return s.a_norm * radial_value(s.k, s.lambda, s.c, rho);
}

double mode_laplacian_radial(const PlateMode& mode, double rho, double a) {
    const PlateShape& s = mode.shape;
    const double beta2 = (s.lambda / a) * (s.lambda / a);
    return s.a_norm * beta2 *
           (-bessel_j(s.k, s.lambda * rho) + s.c * bessel_i(s.k, s.lambda * rho));
}

namespace {
double angular_value(const PlateMode& mode, double theta) {
    const int k = mode.shape.k;
    return mode.parity == Parity::Cosine ? std::cos(k * theta) : std::sin(k * theta);
}
} // namespace

double mode_eval(const PlateMode& mode, double r, double theta, double a) {
    if (r < 0.0 || r > a)
        throw std::domain_error("mode_eval: r outside [0, a]");
    return mode_radial(mode, r / a) * angular_value(mode, theta);
}

double mode_laplacian_eval(const PlateMode& mode, double r, double theta, double a) {
    if (r < 0.0 || r > a)
        throw std::domain_error("mode_laplacian_eval: r outside [0, a]");
    return mode_laplacian_radial(mode, r / a, a) * angular_value(mode, theta);
}

Eigen::MatrixXd gram_matrix(const std::vector<PlateMode>& basis) {
    if (basis.empty())
        throw std::invalid_argument("gram_matrix: empty basis");
    const int n = static_cast<int>(basis.size());
    const QuadratureRule& rule = radial_rule();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const PlateMode& bi = basis[static_cast<std::size_t>(i)];
            const PlateMode& bj = basis[static_cast<std::size_t>(j)];
            const double ang = angular_overlap(bi.shape.k, bi.parity, bj.shape.k, bj.parity);
            if (ang == 0.0)
                continue;
            double radial = 0.0;
            for (Eigen::Index q = 0; q < rule.nodes.size(); ++q) {
                const double rho = rule.nodes(q);
                radial += rule.weights(q) * mode_radial(bi, rho) * mode_radial(bj, rho) * rho;
            }
            M(i, j) = M(j, i) = ang * radial;
        }
    }
    return M;
}

Eigen::MatrixXd laplacian_gram(const std::vector<PlateMode>& basis, double a) {
    if (basis.empty())
        throw std::invalid_argument("laplacian_gram: empty basis");
    const int n = static_cast<int>(basis.size());
    const QuadratureRule& rule = radial_rule();
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const PlateMode& bi = basis[static_cast<std::size_t>(i)];
            const PlateMode& bj = basis[static_cast<std::size_t>(j)];
            const double ang = angular_overlap(bi.shape.k, bi.parity, bj.shape.k, bj.parity);
            if (ang == 0.0)
                continue;
            double radial = 0.0;
            for (Eigen::Index q = 0; q < rule.nodes.size(); ++q) {
                const double rho = rule.nodes(q);
                radial += rule.weights(q) * mode_laplacian_radial(bj, rho, a) *
                          mode_radial(bi, rho) * rho;
            }
            L(i, j) = ang * radial;
        }
    }
    return L;
}

BoundaryResidual boundary_residual(const PlateShape& shape, double nu) {
    const BcTerms t = bc_terms(shape.k, shape.lambda, nu);
    // residual of each condition relative to its own term magnitudes
    const double scale1 = std::max(std::abs(t.t1j), std::abs(shape.c * t.t1i));
    const double scale2 = std::max(std::abs(t.t2j), std::abs(shape.c * t.t2i));
    BoundaryResidual r;
    r.moment = std::abs(t.t1j + shape.c * t.t1i) / std::max(scale1, 1e-30);
    r.shear = std::abs(t.t2j + shape.c * t.t2i) / std::max(scale2, 1e-30);
    return r;
}

double characteristic_determinant(int k, double lambda, double nu) {
    return char_det(k, lambda, nu);
}

} // namespace aoctrl

#include "aoctrl/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace aoctrl {

QuadratureRule gauss_legendre(int n, double a, double b) {
    if (n < 1)
        throw std::invalid_argument("gauss_legendre: need at least one node");

    Eigen::VectorXd x(n), w(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n.
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15)
                break;
        }
        x(i) = -z;
        x(n - 1 - i) = z;
        w(i) = 2.0 / ((1.0 - z * z) * pp * pp);
        w(n - 1 - i) = w(i);
    }

    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    QuadratureRule rule;
    rule.nodes = (half * x).array() + mid;
    rule.weights = half * w;
    return rule;
}

} // namespace aoctrl

#pragma once

#include <Eigen/Dense>

namespace aoctrl {

/// Gauss-Legendre rule mapped to [a, b].
struct QuadratureRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;

    template <typename F>
    double integrate(F&& f) const {
        double s = 0.0;
        for (Eigen::Index i = 0; i < nodes.size(); ++i)
            s += weights(i) * f(nodes(i));
        return s;
    }
};

/// Nodes/weights by Newton iteration on the Legendre polynomial.
QuadratureRule gauss_legendre(int n, double a = 0.0, double b = 1.0);

} // namespace aoctrl

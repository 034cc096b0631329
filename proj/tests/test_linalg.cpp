#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "aoctrl/discretize.hpp"
#include "aoctrl/errors.hpp"
#include "aoctrl/lyapunov.hpp"
#include "aoctrl/quadrature.hpp"

using namespace aoctrl;

TEST_CASE("gauss-legendre exactness") {
    const QuadratureRule r5 = gauss_legendre(5);
    double s = 0.0;
    for (Eigen::Index i = 0; i < r5.nodes.size(); ++i)
        s += r5.weights(i) * std::pow(r5.nodes(i), 5);
    CHECK(s == doctest::Approx(1.0 / 6.0).epsilon(1e-14));

    const QuadratureRule r64 = gauss_legendre(64, 0.0, 2.0);
    double t = 0.0;
    for (Eigen::Index i = 0; i < r64.nodes.size(); ++i)
        t += r64.weights(i) * std::pow(r64.nodes(i), 10);
    CHECK(t == doctest::Approx(std::pow(2.0, 11) / 11.0).epsilon(1e-14));

    CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
}

TEST_CASE("lyapunov solver") {
    SUBCASE("scalar") {
        Eigen::MatrixXd A(1, 1), Q(1, 1);
        A << -1.0;
        Q << 2.0;
        const Eigen::MatrixXd X = solve_continuous_lyapunov(A, Q);
        CHECK(X(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    }

    SUBCASE("random stable systems") {
        std::mt19937_64 rng(11);
        std::normal_distribution<double> g;
        for (int trial = 0; trial < 15; ++trial) {
            const int n = 2 + static_cast<int>(rng() % 9);
            Eigen::MatrixXd A(n, n), R(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    A(i, j) = g(rng);
                    R(i, j) = g(rng);
                }
            // shift to guarantee stability
            Eigen::EigenSolver<Eigen::MatrixXd> eig(A, false);
            A -= (eig.eigenvalues().real().maxCoeff() + 0.5) *
                 Eigen::MatrixXd::Identity(n, n);
            const Eigen::MatrixXd Q = R * R.transpose();
            const Eigen::MatrixXd X = solve_continuous_lyapunov(A, Q);
            CHECK((A * X + X * A.transpose() + Q).norm() <= 1e-10 * Q.norm());
            CHECK((X - X.transpose()).norm() <= 1e-12 * X.norm());
        }
    }

    SUBCASE("degenerate spectrum is rejected") {
        Eigen::MatrixXd A(2, 2), Q(2, 2);
        A << 1.0, 0.0, 0.0, -1.0;  // eigenvalue sum 0
        Q.setIdentity();
        CHECK_THROWS_AS(solve_continuous_lyapunov(A, Q), NumericalError);
    }
}

TEST_CASE("symmetric sqrt") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    Eigen::MatrixXd R(5, 5);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            R(i, j) = g(rng);
    const Eigen::MatrixXd S = R * R.transpose();
    const Eigen::MatrixXd L = symmetric_sqrt(S);
    CHECK((L * L - S).norm() <= 1e-12 * S.norm());
    CHECK((L - L.transpose()).norm() <= 1e-12 * L.norm());
}

TEST_CASE("zoh discretization") {
    // integrator: Ad = 1, Bd = dt
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(1, 1), B = Eigen::MatrixXd::Ones(1, 1);
    const ZohSystem z = zoh_discretize(A, B, 0.25);
    CHECK(z.Ad(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(z.Bd(0, 0) == doctest::Approx(0.25).epsilon(1e-15));

    // first-order lag against the closed form
    A << -2.0;
    const ZohSystem z2 = zoh_discretize(A, B, 0.3);
    CHECK(z2.Ad(0, 0) == doctest::Approx(std::exp(-0.6)).epsilon(1e-14));
    CHECK(z2.Bd(0, 0) ==
          doctest::Approx((1.0 - std::exp(-0.6)) / 2.0).epsilon(1e-14));
}

TEST_CASE("exact noise discretization") {
    SUBCASE("scalar closed form") {
        Eigen::MatrixXd A(1, 1), BBt(1, 1);
        const double a = -0.5, b = 2.0, dt = 0.3;
        A << a;
        BBt << b * b;
        const DiscretizedNoise d = exact_discretize_noise(A, BBt, dt);
        CHECK(d.Ad(0, 0) == doctest::Approx(std::exp(a * dt)).epsilon(1e-14));
        CHECK(d.cov(0, 0) ==
              doctest::Approx(b * b * (std::exp(2 * a * dt) - 1.0) / (2 * a))
                  .epsilon(1e-13));
    }

    SUBCASE("matches quadrature on a 3-state system") {
        Eigen::MatrixXd A(3, 3);
        A << -1.0, 0.5, 0.0, -0.5, -1.0, 0.2, 0.0, 0.1, -2.0;
        Eigen::MatrixXd B(3, 2);
        B << 1.0, 0.0, 0.0, 2.0, 0.3, -0.4;
        const double dt = 0.12;
        const DiscretizedNoise d = exact_discretize_noise(A, B * B.transpose(), dt);

        // dense trapezoid quadrature of the integrand as oracle
        const int nsub = 4000;
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(3, 3);
        for (int k = 0; k <= nsub; ++k) {
            const double s = dt * k / nsub;
            const Eigen::MatrixXd E = (A * s).exp();
            const Eigen::MatrixXd f = E * B * B.transpose() * E.transpose();
            acc += (k == 0 || k == nsub) ? 0.5 * f : f;
        }
        acc *= dt / nsub;
        CHECK((d.cov - acc).norm() <= 1e-7 * acc.norm());
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "aoctrl/quadrature.hpp"
#include "aoctrl/zernike.hpp"

using namespace aoctrl;

namespace {

// Spouge approximation of the gamma function: an evaluation path that is
// independent of std::tgamma, used to cross-check the covariance constant.
double spouge_gamma(double x) {
    constexpr int a = 12;
    if (x < 0.5)
        return M_PI / (std::sin(M_PI * x) * spouge_gamma(1.0 - x));
    x -= 1.0;
    double acc = std::sqrt(2.0 * M_PI);
    double fact = 1.0;
    for (int k = 1; k < a; ++k) {
        fact *= (k == 1) ? 1.0 : -(k - 1);
        const double ck =
            std::pow(a - k, k - 0.5) * std::exp(double(a - k)) / fact;
        acc += ck / (x + k);
    }
    return acc * std::pow(x + a, x + 0.5) * std::exp(-(x + a));
}

double covariance_reference(int ni, int nj, int m, double ratio) {
    const int se = (ni + nj - 2 * m) / 2;
    const double sign = (se % 2 == 0) ? 1.0 : -1.0;
    return 7.19e-3 * sign * std::pow(ratio, 5.0 / 3.0) *
           std::sqrt(double((ni + 1) * (nj + 1))) * std::pow(M_PI, 8.0 / 3.0) *
           spouge_gamma(14.0 / 3.0) * spouge_gamma((ni + nj - 5.0 / 3.0) / 2.0) /
           (spouge_gamma((ni - nj + 17.0 / 3.0) / 2.0) *
            spouge_gamma((nj - ni + 17.0 / 3.0) / 2.0) *
            spouge_gamma((ni + nj + 23.0 / 3.0) / 2.0));
}

} // namespace

TEST_CASE("index table") {
    ZernikeMode m4 = noll_indices(4);
    CHECK(m4.radial_order == 2);
    CHECK(m4.azimuthal_order == 0);
    CHECK(m4.kind == AngularKind::RadialOnly);

    ZernikeMode m10 = noll_indices(10);
    CHECK(m10.radial_order == 3);
    CHECK(m10.azimuthal_order == 3);
    CHECK(m10.kind == AngularKind::Cosine);

    ZernikeMode m1 = noll_indices(1);
    CHECK(m1.radial_order == 0);
    CHECK(m1.azimuthal_order == 0);
    CHECK(m1.kind == AngularKind::RadialOnly);

    for (int i = 1; i <= 15; ++i) {
        ZernikeMode m = noll_indices(i);
        CHECK(m.radial_order >= m.azimuthal_order);
        CHECK((m.radial_order - m.azimuthal_order) % 2 == 0);
        CHECK((m.kind == AngularKind::RadialOnly) == (m.azimuthal_order == 0));
    }

    CHECK_THROWS_AS(noll_indices(0), std::out_of_range);
    CHECK_THROWS_AS(noll_indices(16), std::out_of_range);
    CHECK_THROWS_AS(noll_indices(9, 8), std::out_of_range);
}

TEST_CASE("point evaluations") {
    const double a = 0.025;
    CHECK(zernike_eval(noll_indices(5), a, 0.0, a) ==
          doctest::Approx(std::sqrt(6.0)).epsilon(1e-14));
    for (double th : {0.0, 0.4, 2.0})
        CHECK(zernike_eval(noll_indices(7), 0.0, th, a) == doctest::Approx(0.0));
    CHECK(zernike_eval(noll_indices(9), a, 1.3, a) ==
          doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));

    CHECK_THROWS_AS(zernike_eval(noll_indices(4), 1.01 * a, 0.0, a),
                    std::domain_error);
    CHECK_THROWS_AS(zernike_eval(noll_indices(4), -1e-9, 0.0, a),
                    std::domain_error);
}

TEST_CASE("orthonormality under the normalized disk measure") {
    // 64 radial Gauss-Legendre nodes x 256 uniform azimuthal nodes
    const QuadratureRule rad = gauss_legendre(64);
    const int ntheta = 256;
    const double a = 0.025;
    double worst = 0.0;
    for (int i = 1; i <= 15; ++i) {
        for (int j = i; j <= 15; ++j) {
            double acc = 0.0;
            for (Eigen::Index q = 0; q < rad.nodes.size(); ++q) {
                const double r = rad.nodes(q) * a;
                double ang = 0.0;
                for (int t = 0; t < ntheta; ++t) {
                    const double theta = 2.0 * M_PI * t / ntheta;
                    ang += zernike_eval(noll_indices(i), r, theta, a) *
                           zernike_eval(noll_indices(j), r, theta, a);
                }
                acc += rad.weights(q) * rad.nodes(q) * ang * (2.0 * M_PI / ntheta);
            }
            acc /= M_PI;  // (1/(pi a^2)) * integral, with r dr = a^2 rho drho
            const double target = (i == j) ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(acc - target));
        }
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("covariance values and selection rules") {
    CHECK(noll_covariance(noll_indices(4), noll_indices(5), 8.0) == 0.0);
    CHECK(noll_covariance(noll_indices(4), noll_indices(11), 8.0) == 0.0);
    CHECK(noll_covariance(noll_indices(5), noll_indices(6), 8.0) == 0.0);

    // reference values from a 50-digit evaluation of the closed form
    const double v44 = noll_covariance(noll_indices(4), noll_indices(4), 8.0);
    CHECK(v44 == doctest::Approx(0.74074080206531823).epsilon(1e-12));
    const double v49 = noll_covariance(noll_indices(4), noll_indices(9), 8.0);
    CHECK(v49 == doctest::Approx(-0.12375546938356205).epsilon(1e-12));
    const double v77 = noll_covariance(noll_indices(7), noll_indices(7), 8.0);
    CHECK(v77 == doctest::Approx(0.19753088055075153).epsilon(1e-12));

    // independent gamma-function route
    CHECK(v44 == doctest::Approx(covariance_reference(2, 2, 0, 8.0)).epsilon(1e-10));
    CHECK(v49 == doctest::Approx(covariance_reference(2, 4, 0, 8.0)).epsilon(1e-10));
    CHECK(v77 == doctest::Approx(covariance_reference(3, 3, 1, 8.0)).epsilon(1e-10));

    CHECK_THROWS_AS(noll_covariance(noll_indices(1), noll_indices(4), 8.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(noll_covariance(noll_indices(4), noll_indices(4), 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(noll_covariance(noll_indices(4), noll_indices(4), -2.0),
                    std::invalid_argument);
}

TEST_CASE("covariance matrix symmetry, PSD, scaling law") {
    const Eigen::MatrixXd P8 = noll_covariance_matrix(4, 15, 8.0);
    const Eigen::MatrixXd P1 = noll_covariance_matrix(4, 15, 1.0);

    for (int i = 0; i < P8.rows(); ++i)
        for (int j = 0; j < P8.cols(); ++j)
            CHECK(P8(i, j) == P8(j, i));  // exactly symmetric

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(P8);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-12 * P8.trace());

    const double scale = std::pow(8.0, 5.0 / 3.0);
    CHECK((P8 - scale * P1).cwiseAbs().maxCoeff() <=
          1e-13 * P8.cwiseAbs().maxCoeff());
}

#include "aoctrl/zernike.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace aoctrl {

namespace {

struct TableRow {
    int n, m;
    AngularKind kind;
    double norm;
    // radial polynomial in rho, as (power, coefficient) pairs
    std::array<std::pair<int, double>, 3> poly;
    int terms;
};

// Indexing and polynomials of the first 15 modes.  Note the last pair keeps
// the degree-5 radial polynomial paired with the 4-theta angular factor; the
// set is orthonormal as listed and matches the fixture tables.
const std::array<TableRow, 15> kTable = {{
    {0, 0, AngularKind::RadialOnly, 1.0, {{{0, 1.0}, {}, {}}}, 1},
    {1, 1, AngularKind::Cosine, 2.0, {{{1, 1.0}, {}, {}}}, 1},
    {1, 1, AngularKind::Sine, 2.0, {{{1, 1.0}, {}, {}}}, 1},
    {2, 0, AngularKind::RadialOnly, std::sqrt(3.0), {{{2, 2.0}, {0, -1.0}, {}}}, 2},
    {2, 2, AngularKind::Cosine, std::sqrt(6.0), {{{2, 1.0}, {}, {}}}, 1},
    {2, 2, AngularKind::Sine, std::sqrt(6.0), {{{2, 1.0}, {}, {}}}, 1},
    {3, 1, AngularKind::Cosine, std::sqrt(8.0), {{{3, 3.0}, {1, -2.0}, {}}}, 2},
    {3, 1, AngularKind::Sine, std::sqrt(8.0), {{{3, 3.0}, {1, -2.0}, {}}}, 2},
    {4, 0, AngularKind::RadialOnly, std::sqrt(5.0), {{{4, 6.0}, {2, -6.0}, {0, 1.0}}}, 3},
    {3, 3, AngularKind::Cosine, std::sqrt(8.0), {{{3, 1.0}, {}, {}}}, 1},
    {3, 3, AngularKind::Sine, std::sqrt(8.0), {{{3, 1.0}, {}, {}}}, 1},
    {4, 2, AngularKind::Cosine, std::sqrt(10.0), {{{4, 4.0}, {2, -3.0}, {}}}, 2},
    {4, 2, AngularKind::Sine, std::sqrt(10.0), {{{4, 4.0}, {2, -3.0}, {}}}, 2},
    {4, 4, AngularKind::Cosine, std::sqrt(12.0), {{{5, 10.0}, {3, -12.0}, {1, 3.0}}}, 3},
    {4, 4, AngularKind::Sine, std::sqrt(12.0), {{{5, 10.0}, {3, -12.0}, {1, 3.0}}}, 3},
}};

const TableRow& table_row(int i) {
    return kTable[static_cast<std::size_t>(i - 1)];
}

} // namespace

ZernikeMode noll_indices(int i, int cap) {
    if (cap < 1 || cap > kZernikeTableSize)
        throw std::out_of_range("noll_indices: cap must be in [1, 15]");
    if (i < 1 || i > cap)
        throw std::out_of_range("noll_indices: index " + std::to_string(i) +
                                " outside [1, " + std::to_string(cap) + "]");
    const TableRow& row = table_row(i);
    return ZernikeMode{i, row.n, row.m, row.kind};
}

std::vector<ZernikeMode> zernike_modes(int first, int last) {
    std::vector<ZernikeMode> out;
    out.reserve(static_cast<std::size_t>(last - first + 1));
    for (int i = first; i <= last; ++i)
        out.push_back(noll_indices(i, kZernikeTableSize));
    return out;
}

double zernike_radial(const ZernikeMode& mode, double rho) {
    const TableRow& row = table_row(mode.noll_index);
    double v = 0.0;
    for (int t = 0; t < row.terms; ++t)
        v += row.poly[static_cast<std::size_t>(t)].second *
             std::pow(rho, row.poly[static_cast<std::size_t>(t)].first);
    return row.norm * v;
}

double zernike_eval(const ZernikeMode& mode, double r, double theta, double a) {
    if (r < 0.0 || r > a)
        throw std::domain_error("zernike_eval: r outside [0, a]");
    const double rad = zernike_radial(mode, r / a);
    switch (mode.kind) {
    case AngularKind::Cosine:
        return rad * std::cos(mode.azimuthal_order * theta);
    case AngularKind::Sine:
        return rad * std::sin(mode.azimuthal_order * theta);
    case AngularKind::RadialOnly:
        return rad;
    }
    return 0.0;
}

double noll_covariance(const ZernikeMode& mi, const ZernikeMode& mj,
                       double d_over_r0) {
    if (mi.noll_index < 2 || mj.noll_index < 2)
        throw std::invalid_argument("noll_covariance: piston excluded");
    if (!(d_over_r0 > 0.0))
        throw std::invalid_argument("noll_covariance: D/r0 must be positive");

    // selection rules: equal azimuthal order and equal angular kind
    if (mi.azimuthal_order != mj.azimuthal_order || mi.kind != mj.kind)
        return 0.0;

    const int ni = mi.radial_order, nj = mj.radial_order;
    const int sign_exp = (ni + nj - mi.azimuthal_order - mj.azimuthal_order) / 2;
    const double sign = (sign_exp % 2 == 0) ? 1.0 : -1.0;

    const double gammas =
        std::tgamma(14.0 / 3.0) * std::tgamma((ni + nj - 5.0 / 3.0) / 2.0) /
        (std::tgamma((ni - nj + 17.0 / 3.0) / 2.0) *
         std::tgamma((nj - ni + 17.0 / 3.0) / 2.0) *
         std::tgamma((ni + nj + 23.0 / 3.0) / 2.0));

    return 7.19e-3 * sign * std::pow(d_over_r0, 5.0 / 3.0) *
           std::sqrt(double((ni + 1) * (nj + 1))) * std::pow(M_PI, 8.0 / 3.0) *
           gammas;
}

Eigen::MatrixXd noll_covariance_matrix(int first, int last, double d_over_r0) {
    const std::vector<ZernikeMode> modes = zernike_modes(first, last);
    const int n = static_cast<int>(modes.size());
    Eigen::MatrixXd P(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            P(i, j) = noll_covariance(modes[static_cast<std::size_t>(i)],
                                      modes[static_cast<std::size_t>(j)], d_over_r0);
    return P;
}

} // namespace aoctrl

#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aoctrl/config.hpp"

namespace aoctrl {

/// One tabulated reference row for a plate shape, with annotation flags for
/// known print defects.
struct PlateFixtureRow {
    int row = 0;       // position in the reference table
    int i = 0, j = 0, k = 0;
    double lambda = 0.0, c = 0.0, a_norm = 0.0;
    std::vector<std::string> flags;
};

/// One tabulated reference row of the turbulence state-space fixture.
struct TurbulenceFixtureRow {
    int row = 0;             // 1-based; row r corresponds to Zernike r+3
    double f = 0.0;          // tabulated drift diagonal
    std::vector<std::pair<int, double>> g;  // tabulated G entries (col, value)
    std::vector<std::string> flags;
};

struct ZernikeFixtureRow {
    int i = 0, n = 0, m = 0;
    std::string kind;  // "cosine" | "sine" | "radial"
};

struct PlateFixture {
    std::vector<PlateFixtureRow> rows;
};
struct TurbulenceFixture {
    std::vector<TurbulenceFixtureRow> rows;
    double v_over_d = 0.0;
    double d_over_r0 = 0.0;
    /// Gram entries excluded from the generated-vs-tabulated comparison.
    std::vector<std::pair<int, int>> anomalous_gram_entries;
};
struct ZernikeFixture {
    std::vector<ZernikeFixtureRow> rows;
};

PlateFixture load_plate_fixture(const std::string& path);
TurbulenceFixture load_turbulence_fixture(const std::string& path);
ZernikeFixture load_zernike_fixture(const std::string& path);

/// Row-level validation verdicts, suitable for printing and for exit-code
/// decisions.
struct FixtureRowReport {
    std::string id;
    bool pass = false;
    bool skipped = false;      // anomaly flags honored
    double computed = 0.0;
    double expected = 0.0;
    double rel_err = 0.0;
    std::string note;
};

struct FixtureReport {
    std::vector<FixtureRowReport> rows;
    bool all_pass() const;
    int failures() const;
};

/// Recompute the drift diagonal and the Gram of the tabulated noise rows.
FixtureReport validate_turbulence_fixture(const TurbulenceFixture& fx);

/// Solve shapes at the fixture's Poisson ratio and pair tabulated rows to
/// solved shapes by nearest lambda; checks lambda, c, a within 1e-3 relative
/// and boundary residuals within 1e-8.
FixtureReport validate_plate_fixture(const PlateFixture& fx,
                                     const PhysicalParams& params);

/// Check the indexing table and disk orthonormality of the listed modes.
FixtureReport validate_zernike_fixture(const ZernikeFixture& fx);

} // namespace aoctrl

#pragma once

#include <iosfwd>
#include <vector>

#include "aoctrl/config.hpp"
#include "aoctrl/hinf.hpp"
#include "aoctrl/plant.hpp"
#include "aoctrl/sim.hpp"

namespace aoctrl {

/// Everything built from a config up to the standard plant.
struct AoSystem {
    std::vector<PlateShape> shapes;
    std::vector<PlateMode> basis;
    std::vector<ZernikeMode> zernikes;
    TurbulenceModel turbulence;
    StandardPlant plant;
};

/// Shapes whose cosine/sine expansion covers basis_count functions.
std::vector<PlateShape> solve_shapes_for_basis(const RunConfig& cfg);

/// modes -> turbulence -> projection -> plant.
AoSystem build_system(const RunConfig& cfg);

/// build_system + gamma_bisect.
struct SynthesisRun {
    AoSystem system;
    GammaSearchResult search;
    double certified_norm = 0.0;
};
SynthesisRun run_synthesis(const RunConfig& cfg, std::ostream& log);

} // namespace aoctrl

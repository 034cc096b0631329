#include "aoctrl/pipeline.hpp"

#include <ostream>

#include "aoctrl/errors.hpp"

namespace aoctrl {

std::vector<PlateShape> solve_shapes_for_basis(const RunConfig& cfg) {
    // grow the shape count until the expanded basis covers N_B
    for (int count = (cfg.basis_count + 1) / 2;; ++count) {
        std::vector<PlateShape> shapes =
            solve_mode_shapes(cfg.physical, cfg.k_max, count);
        if (static_cast<int>(expand_basis(shapes).size()) >= cfg.basis_count)
            return shapes;
    }
}

AoSystem build_system(const RunConfig& cfg) {
    cfg.validate();
    AoSystem sys;

    sys.shapes = solve_shapes_for_basis(cfg);
    std::vector<PlateMode> expanded = expand_basis(sys.shapes);
    expanded.resize(static_cast<std::size_t>(cfg.basis_count));
    sys.basis = std::move(expanded);

    sys.zernikes = zernike_modes(4, cfg.zernike_count);
    sys.turbulence =
        build_turbulence_model(cfg.zernike_count, cfg.v_over_d, cfg.d_over_r0);

    const Eigen::MatrixXd Q =
        build_projection(sys.zernikes, sys.basis, cfg.physical.radius);
    sys.plant = assemble_plant(cfg.physical, sys.basis, sys.turbulence, Q);
    return sys;
}

SynthesisRun run_synthesis(const RunConfig& cfg, std::ostream& log) {
    SynthesisRun run;
    cfg.v_over_d_discrepancy(log);
    run.system = build_system(cfg);
    run.search = gamma_bisect(run.system.plant, cfg.gamma.lo, cfg.gamma.hi,
                              cfg.gamma.tol, cfg.gamma.cap);
    run.certified_norm =
        closed_loop_hinf_norm(run.system.plant, run.search.controller, 1e-6);
    return run;
}

} // namespace aoctrl

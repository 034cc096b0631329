#pragma once

#include <string>
#include <vector>

#include "aoctrl/plate.hpp"
#include "aoctrl/sim.hpp"

namespace aoctrl {

/// Norm traces, one row per sample: t, ||phi_tur||, ||phi_res||, ||u||
/// (plus the plain coefficient RSS of the residual for comparison).
void write_sim_csv(const SimResult& result, const std::string& path);
std::string sim_csv_string(const SimResult& result);

/// Shape table: k, j, lambda, c, a, omega.
void write_modes_csv(const std::vector<PlateShape>& shapes, const std::string& path);

/// Sampled turbulence path: t, phi_4..phi_NZ.
void write_turbulence_csv(const Eigen::MatrixXd& path_samples, double dt,
                          int first_index, const std::string& path);

} // namespace aoctrl

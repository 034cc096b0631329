#pragma once

#include <string>

#include <Eigen/Dense>

#include "aoctrl/hinf.hpp"
#include "aoctrl/plant.hpp"

namespace aoctrl {

/// Plant <-> JSON document {version, dims, named row-major matrices,
/// params echo}.  Round-trips bit-exactly (shortest-round-trip doubles).
void save_plant(const StandardPlant& plant, const std::string& path);
StandardPlant load_plant(const std::string& path);
std::string plant_to_json_string(const StandardPlant& plant);

/// Controller <-> JSON {version, gamma, M, N, L, R, residuals}.
void save_controller(const HinfController& K, const std::string& path);
HinfController load_controller(const std::string& path);

} // namespace aoctrl

#pragma once

#include <stdexcept>
#include <string>

namespace aoctrl {

/// Invalid user-facing configuration (bad ranges, malformed files).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical routine failed (root bracketing, Schur reordering,
/// ill-conditioned subspace, unstable closed loop, ...).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace aoctrl

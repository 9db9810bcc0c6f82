#pragma once

#include <stdexcept>
#include <string>

namespace fdip {

/// Malformed or contradictory input (documents, CLI arguments, config).
/// The CLI maps this to exit code 2.
struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An internal resource limit was exceeded (arithmetic overflow on the tick
/// grid, oracle instance too large, solver iteration cap). CLI exit code 4.
struct limit_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace fdip

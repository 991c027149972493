#pragma once

#include "les/config.hpp"
#include "les/degenerate_solver.hpp"

namespace les::scenarios {

// Named presets shared by the CLI and the test suites.
config::RunConfig preset(const std::string& name);
std::vector<std::string> preset_names();

// Materialize the problem a config describes. `base_dir` resolves relative
// density tables.
solver::Problem build_problem(const config::RunConfig& cfg,
                              const std::string& base_dir = ".");

levy::LevyMeasure build_measure(const config::MeasureSpec& spec,
                                const std::string& base_dir = ".");
nl::Nonlinearity build_nonlinearity(const config::RunConfig& cfg);
grid::Closure build_uc(const config::DataSpec& spec, const config::GridSpec& g);

}  // namespace les::scenarios

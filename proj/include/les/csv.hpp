#pragma once

#include <string>

#include "les/degenerate_solver.hpp"
#include "les/grid.hpp"

namespace les::csv {

// time-major rows (t, x, u, b_of_u) with a header line
void write_field(const std::string& path, const solver::SolutionField& field,
                 const nl::PiecewiseLinear& b);

struct LoadedField {
  std::vector<double> times;
  std::vector<double> xs;                 // per slice column
  std::vector<Eigen::ArrayXd> slices;     // u values
  std::vector<Eigen::ArrayXd> b_columns;  // stored b(u) values
};
LoadedField read_field(const std::string& path);

// two-column (x, value) dump of a grid function
void write_grid_function(const std::string& path, const grid::Grid& g,
                         const Eigen::ArrayXd& values);

}  // namespace les::csv

#pragma once

#include <Eigen/Core>
#include <memory>
#include <vector>

#include "les/grid.hpp"
#include "les/nonlinearity.hpp"

namespace les::hyper {

using grid::Closure;
using grid::Grid;
using grid::GridFunction;

class CertificateError : public std::runtime_error {
 public:
  explicit CertificateError(const std::string& what)
      : std::runtime_error(what) {}
};

constexpr double kDefaultCfl = 0.45;

// One explicit Engquist-Osher step state: cell values at time t, the step
// size, and a source field frozen over the step.
struct HyperbolicState {
  GridFunction u;
  double t = 0;
  double dt = 0;
  Eigen::ArrayXd source;  // per box cell; only interior cells are used
};

// CFL certificate dt * L_f / dx <= budget < 1.
bool cfl_ok(const Grid& g, const nl::Nonlinearity& nl, double dt,
            double budget = kDefaultCfl);

// u_i - (dt/dx)(F_{i+1/2} - F_{i-1/2}) + dt g_i on interior cells; ghost
// values outside (a,b) come from uc at the current time. Refuses to step
// when the CFL certificate fails.
HyperbolicState step(const HyperbolicState& state, const nl::Nonlinearity& nl,
                     const Closure& uc, double cfl_budget = kDefaultCfl);

// Space-time field: all time slices of one run.
struct Field {
  std::shared_ptr<const Grid> grid;
  std::vector<double> times;
  std::vector<Eigen::ArrayXd> slices;
  std::string provenance;
  double dt = 0;

  int n_slices() const { return static_cast<int>(slices.size()); }
};

// March to the horizon with a time-dependent frozen source g(t, x); slices
// at every step are retained. `g` may be empty (zero source).
Field solve_with_source(const GridFunction& u0, const Closure& uc,
                        const std::function<double(double, double)>& g,
                        double horizon, const nl::Nonlinearity& nl,
                        double dt_request = 0.0,
                        double cfl_budget = kDefaultCfl);

double l1_interior_distance(const Field& x, const Field& y, int slice);

}  // namespace les::hyper

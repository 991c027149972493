#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "les/hyperbolic.hpp"
#include "les/levy_measure.hpp"
#include "les/nonlocal_ops.hpp"

namespace les::solver {

using grid::Closure;
using grid::Grid;
using grid::GridFunction;
using hyper::CertificateError;
using levy::LevyMeasure;

// Full problem description: domain grid, nonlinearity, jump measure, initial
// data on the interior, exterior data as an analytic space-time closure, and
// the horizon.
struct Problem {
  std::shared_ptr<const Grid> grid;
  nl::Nonlinearity nl;
  LevyMeasure mu = LevyMeasure::compound_poisson({});
  Eigen::ArrayXd u0;  // per box cell; exterior cells are overwritten by uc
  Closure uc;
  double horizon = 1.0;
  double cfl_budget = hyper::kDefaultCfl;
  double dt_request = 0.0;

  double data_min() const;
  double data_max() const;
  GridFunction initial_state() const;
};

using SolutionField = hyper::Field;

// certificates actually used by a run
struct Certificates {
  double dt = 0;
  double dt_hyperbolic = 0;   // cfl bound
  double dt_diffusion = 0;    // combined monotonicity bound
  double combined_value = 0;  // dt * [Lf/dx + Lb (sigma2/dx^2 + 2 tail)]
  double tail_remainder = 0;  // neglected measure mass beyond z_max
  bool dt_shrunk = false;     // requested step was cut to meet a certificate
};

// Explicit monotone scheme for du/dt + d/dx f(u) = L[b(u)]: Engquist-Osher
// flux plus the split jump operator applied to b(u), all forward Euler.
SolutionField solve_direct(const Problem& p, Certificates* cert = nullptr);

struct FixedPointResult {
  SolutionField field;
  std::vector<double> gaps;  // sup_t L1(domain) gap per outer iteration
  bool converged = false;
};
// Source-freezing iteration u_{k+1} = I[u_k]: each iterate solves the
// conservation law with g = L[b(previous iterate extended by uc)]. Requires
// a finite measure (atoms only).
FixedPointResult solve_fixed_point(const Problem& p, double tol, int k_max);

struct TruncatedRun {
  std::vector<int> ladder;
  std::vector<SolutionField> fields;
  std::vector<double> measure_distances;  // distance(mu_n, mu) per rung
};
// One solve per n with the jump measure restricted to {|z| >= 1/n}. All
// rungs share one time step so the fields are slice-comparable.
TruncatedRun run_truncated_sequence(const Problem& p,
                                    const std::vector<int>& n_ladder);

struct ViscosityRun {
  SolutionField hyperbolic;
  std::vector<SolutionField> fields;
  std::vector<double> l1_distances;  // ||u_n - u_hyp||_{L1(Q)} per rung
};
// Solves with the operator scaled by 1/n for the given fractional order and
// compares against the pure conservation-law run on the same grid and flux.
ViscosityRun run_vanishing_viscosity(const Problem& p, double alpha,
                                     const std::vector<int>& n_ladder);

// L1 over domain x stored times (left Riemann in time); fields must share
// grid and time lattice.
double l1_space_time_distance(const SolutionField& a, const SolutionField& b);
// same for || b(u_a) - b(u_b) ||_{L2(Q)}
double l2_space_time_distance_of_b(const SolutionField& a,
                                   const SolutionField& b,
                                   const nl::PiecewiseLinear& bfun);
// sup over stored slices of the interior L1 distance
double sup_l1_distance(const SolutionField& a, const SolutionField& b);

double l1_interior_norm(const Grid& g, const Eigen::ArrayXd& v);

}  // namespace les::solver

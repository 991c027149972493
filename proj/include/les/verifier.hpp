#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "les/degenerate_solver.hpp"

namespace les::verify {

using grid::Grid;
using solver::Problem;
using solver::SolutionField;

// exp(1 - 1/(1-s^2)) on |s|<1, zero outside; smooth with closed-form
// derivatives
double bump(double s);
double bump_d1(double s);
double bump_d2(double s);

struct SpaceBump {
  double center = 0, width = 1;
  double value(double x) const;
  double d1(double x) const;
  double d2(double x) const;
};

struct TimeBump {
  double width = 1;  // support [0, width)
  double value(double t) const;
  double d1(double t) const;
};

// phi(t,x) = theta(t) beta(x)
struct TestFunction {
  TimeBump theta;
  SpaceBump beta;
  std::string label;
};

struct TestFunctionFamily {
  std::vector<TestFunction> fns;
  // 3 temporal widths x 4 spatial centers (two interior, two straddling the
  // domain endpoints), all supported inside the box
  static TestFunctionFamily standard(const Grid& g, double horizon);
};

// Inner/outer boundary layer ramps: quintic smoothstep over a band of width
// delta at each domain endpoint.
struct BoundaryLayer {
  static double inner(const Grid& g, double delta, double x);
  static double inner_dx(const Grid& g, double delta, double x);
  static double outer(const Grid& g, double delta, double x);
};

struct CheckRecord {
  std::string name;
  double lhs = 0, rhs = 0, tol = 0;
  bool pass = false;
  double slack() const { return rhs + tol - lhs; }
};

struct VerificationReport {
  std::string check;      // machine id, e.g. "energy"
  std::string statement;  // estimate name, e.g. "energy inequality"
  std::vector<CheckRecord> records;
  int skipped = 0;  // inadmissible (k, phi) pairs
  std::map<std::string, std::vector<double>> series;
  bool gated = true;

  bool pass() const {
    for (const auto& r : records)
      if (!r.pass) return false;
    return true;
  }
  void add(std::string name, double lhs, double rhs, double tol) {
    CheckRecord r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.tol = tol;
    r.pass = lhs <= rhs + tol;
    records.push_back(std::move(r));
  }
};

std::vector<double> default_k_grid(double lo, double hi, int inner_count = 17);

// Semi-Kruzkov entropy inequalities against the (sign, k, phi) family at
// splitting radius r; residual budget c_res * (dx + dt). Pairs failing the
// exterior admissibility screen are skipped and counted.
VerificationReport check_entropy_inequalities(const SolutionField& field,
                                              const Problem& p,
                                              const TestFunctionFamily& family,
                                              const std::vector<double>& k_grid,
                                              double r, double c_res);

// Space-time energy of b(u) - b(uc) against the data-side budget.
VerificationReport check_energy(const SolutionField& field, const Problem& p,
                                double rel_slack = 0.05,
                                double tol_abs = 1e-10);

// Jump mass leaving the domain, weighted by |b(u) - b(uc)|, against the
// closed-form constant.
VerificationReport check_boundary_integrability(const SolutionField& field,
                                                const Problem& p,
                                                int c_grid_points = 33);

// Boundary-condition functional along a decreasing delta ladder; the
// certificate takes the smallest of the last three ladder values per
// (k, phi).
VerificationReport check_boundary_condition(const SolutionField& field,
                                            const Problem& p,
                                            const std::vector<double>& deltas,
                                            const std::vector<double>& k_grid,
                                            const TestFunctionFamily& family,
                                            double r, double tol_bc);

// Random sweep of the V-shape mean inequality h(mean)^2 <= L R mean(h).
VerificationReport check_mean_lemma(int trials, std::uint64_t seed);

// Field stays inside [min data, max data] up to tol.
VerificationReport check_max_principle(const SolutionField& field,
                                       const Problem& p, double tol = 1e-12);

// || u(T 2^{-k}) - u0 ||_{L1} decreasing along dyadic times with the stated
// terminal fraction of ||u0||_{L1}.
VerificationReport check_time_continuity(const SolutionField& field,
                                         const Problem& p, int k_max = 8,
                                         double final_fraction = 5e-3);

}  // namespace les::verify

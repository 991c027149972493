#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace les::levy {

// One symmetric atom pair: mass `w` sits at +z and another `w` at -z.
struct Atom {
  double z = 0;
  double w = 0;
};

// Leading small-z behaviour of the density on (0, z_floor):
// rho(z) ~ coef * z^{-1-alpha}. Used for closed-form moment contributions
// below the quadrature floor.
struct PowerTerm {
  double coef = 0;
  double alpha = 0;
};

enum class Kind { fractional, tempered, compound_poisson, dyadic, custom };

class InvalidMeasure : public std::runtime_error {
 public:
  explicit InvalidMeasure(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when two measures do not share a representation grid; the caller
// must re-sample one of them onto the other's layout.
class IncomparableMeasures : public std::runtime_error {
 public:
  explicit IncomparableMeasures(const std::string& what)
      : std::runtime_error(what) {}
};

struct MeasureSplit;

// Normalization constant of the 1-D fractional Laplacian density
// C * |z|^{-1-alpha}, chosen so that the symbol is exactly |xi|^alpha.
double fractional_normalization(double alpha);

// Symmetric Levy measure: an even density rho(z) (optional) plus symmetric
// atom pairs, with all density quadrature carried out on a fixed family of
// geometrically graded cells on [z_floor, z_max]. Immutable once built;
// every service is a pure function of the description.
class LevyMeasure {
 public:
  static constexpr double kDefaultZMax = 1e3;

  static LevyMeasure fractional(double alpha, double z_max = kDefaultZMax);
  static LevyMeasure tempered(double alpha, double lambda,
                              double z_max = kDefaultZMax);
  static LevyMeasure compound_poisson(std::vector<Atom> atoms);
  static LevyMeasure dyadic(int levels = 50);
  // Tabulated density (z > 0 side, symmetrized): piecewise-linear in between
  // the samples, zero outside their range.
  static LevyMeasure from_table(std::vector<Atom> atoms,
                                std::vector<double> z_samples,
                                std::vector<double> rho_samples);
  // Analytic custom density on (0, z_max]; small_z describes the singular
  // part below the quadrature floor (empty: density treated as zero there).
  static LevyMeasure from_density(std::function<double(double)> rho,
                                  double z_max,
                                  std::vector<PowerTerm> small_z = {},
                                  std::function<double(double)> drho = {});

  LevyMeasure scaled(double factor) const;
  LevyMeasure plus(const LevyMeasure& other) const;

  Kind kind() const { return kind_; }
  double z_max() const { return z_max_; }
  double z_floor() const { return z_floor_; }
  bool has_density() const { return static_cast<bool>(density_); }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<double>& cell_edges() const { return edges_; }

  // ∫ (z^2 ∧ 1) dμ over [-z_max, z_max]. Throws InvalidMeasure when the
  // small-z mass fails to converge under refinement.
  double levy_integrand_mass() const;

  // σ_r^2 = ∫_{|z|<r} z^2 dμ
  double small_moment(double r) const;

  // μ({r ≤ |z| ≤ z_max}); the density mass beyond z_max is reported
  // separately by tail_remainder().
  double tail_mass(double r) const;

  // Analytic bound on the density mass beyond z_max (both sides);
  // 0 when the density has no known tail form or none at all.
  double tail_remainder() const;

  // m(xi) = ∫ (1 - cos(xi z)) dμ  (nonnegative, even in xi)
  double symbol(double xi) const;

  struct ShellMin {
    double radius = 0;
    double min_symbol = 0;
    double arg_min = 0;
  };
  struct CompactnessScan {
    std::vector<ShellMin> shells;
    bool minima_increasing = false;
    bool floor_hit = false;
    double floor = 0;
  };
  // Heuristic sampling of inf m over shells |xi| >= R along the ladder.
  // Deterministic: equispaced samples plus atom resonance candidates.
  CompactnessScan compactness_scan(const std::vector<double>& ladder,
                                   int samples_per_shell,
                                   double floor = 1e-6) const;

  MeasureSplit truncate(double r) const;

  // Density + atom mass on one side, restricted to [lo, hi). Density below
  // the quadrature floor is not counted.
  double mass_between(double lo, double hi) const;
  // Density-only quadrature cells (midpoint, mass) within [lo, hi); atoms
  // are reported separately through atoms().
  std::vector<std::pair<double, double>> quantized_cells(double lo,
                                                         double hi) const;
  // Same restriction for ∫ z^2 dμ (one side), including the sub-floor
  // closed form when lo < z_floor.
  double second_moment_between(double lo, double hi) const;

  // Total mass 2 Σ w when the measure is finite (atoms only); nullopt
  // otherwise.
  std::optional<double> total_mass() const;

  friend double measure_distance(const LevyMeasure& a, const LevyMeasure& b);

 private:
  LevyMeasure() = default;
  void build_cells();
  double density_at(double z) const;      // with support restriction applied
  double density_deriv_at(double z) const;
  double subfloor_z2(double up_to) const;  // ∫_0^{min(up_to, z_floor)} z^2 rho
  std::vector<double> edges_within(double lo, double hi) const;
  double symbol_density_part(double xi) const;

  Kind kind_ = Kind::custom;
  std::vector<Atom> atoms_;  // sorted by z ascending
  std::function<double(double)> density_;
  std::function<double(double)> deriv_;
  std::vector<PowerTerm> small_z_;
  double z_floor_ = 1e-10;
  double z_max_ = kDefaultZMax;
  double restrict_lo_ = 0.0;  // density support restriction [lo, hi)
  double restrict_hi_ = std::numeric_limits<double>::infinity();
  std::vector<double> edges_;  // canonical cells covering the restricted support
  double tail_remainder_ = 0.0;
};

// inner is supported in {|z| < r}, outer in {|z| >= r}
struct MeasureSplit {
  LevyMeasure inner;
  LevyMeasure outer;
};

// ∫ (z^2 ∧ 1) d|μ_a - μ_b|. Zero iff the two agree on the shared
// representation grid. Throws IncomparableMeasures when the grids or the
// sub-floor descriptors cannot be aligned.
double measure_distance(const LevyMeasure& a, const LevyMeasure& b);

}  // namespace les::levy

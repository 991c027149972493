#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace les::nl {

class NonlinearityError : public std::runtime_error {
 public:
  explicit NonlinearityError(const std::string& what)
      : std::runtime_error(what) {}
};

inline double pos(double v) { return v > 0.0 ? v : 0.0; }
inline double neg(double v) { return v < 0.0 ? -v : 0.0; }
inline double sgn_pos(double v) { return v > 0.0 ? 1.0 : 0.0; }
inline double sgn_neg(double v) { return v < 0.0 ? -1.0 : 0.0; }
inline double sgn(double v) { return sgn_pos(v) + sgn_neg(v); }

// Continuous piecewise-linear nondecreasing function with f(0)=0, extended
// with its end slopes outside the knot range. Slopes are the primary data;
// this keeps the Lipschitz constant and the slope total variation exact and
// makes ∫ (f(s)-f(k)) ds piecewise quadratic.
class PiecewiseLinear {
 public:
  PiecewiseLinear();  // identity
  // knots strictly increasing; slopes.size() == knots.size() + 1 and each
  // slope >= 0: slope[i] rules (knots[i-1], knots[i])
  PiecewiseLinear(std::vector<double> knots, std::vector<double> slopes);

  static PiecewiseLinear identity();
  static PiecewiseLinear zero();
  static PiecewiseLinear stefan(double latent);           // max(u - L, 0)
  // odd power |u|^m sgn(u) sampled on a knot grid over [-range, range]
  static PiecewiseLinear power(double m, double range, int knots = 512);

  double operator()(double u) const;
  double slope_at(double u) const;  // left-continuous representative
  double lipschitz() const { return lip_; }
  double slope_tv() const { return tv_; }

  // ∫_k^u (b(s) - b(k)) ds, exact on the piecewise-linear representation
  double entropy_integral(double u, double k) const;

  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& slopes() const { return slopes_; }

 private:
  std::vector<double> knots_;
  std::vector<double> vals_;    // values at the knots
  std::vector<double> slopes_;  // one more than knots_
  double lip_ = 0, tv_ = 0;
};

// Flux with exact Engquist-Osher splitting f = f^+ + f^-, where f^+ is
// nondecreasing, f^- nonincreasing, and f^+(0) = f^-(0) = 0.
class Flux {
 public:
  enum class Kind { burgers, linear };

  static Flux burgers();
  static Flux linear(double speed);

  Kind kind() const { return kind_; }
  double speed() const { return speed_; }
  double operator()(double u) const;
  double plus(double u) const;   // ∫_0^u max(f',0)
  double minus(double u) const;  // f - f^+
  double lipschitz(double lo, double hi) const;

 private:
  Kind kind_ = Kind::burgers;
  double speed_ = 0;
};

// Flux/diffusion pair with the metadata every scheme certificate needs.
struct Nonlinearity {
  Flux f = Flux::burgers();
  PiecewiseLinear b = PiecewiseLinear::identity();
  double range_lo = -1.0, range_hi = 1.0;  // invariant range of the data

  double lip_f() const { return f.lipschitz(range_lo, range_hi); }
  double lip_b() const { return b.lipschitz(); }
  double b_slope_tv() const { return b.slope_tv(); }
};

// Semi Kruzkov entropy-entropy flux pair ((u-k)^pm, F^pm).
struct EntropyPair {
  double eta;
  double flux;
};
EntropyPair semi_kruzkov(const Flux& f, double u, double k, int sign);

inline double kruzkov_flux(const Flux& f, double u, double k) {
  return semi_kruzkov(f, u, k, +1).flux + semi_kruzkov(f, u, k, -1).flux;
}

// Boundary entropy-entropy flux pair: F-combination and the corresponding
// |b|-combination.
struct BoundaryPair {
  double fcal;
  double sigma;
};
BoundaryPair boundary_pairs(const Nonlinearity& nl, double u, double uc,
                            double k);

// H(u,k) = ∫_k^u (b(s) - b(k)) ds >= 0
double energy_density(const PiecewiseLinear& b, double u, double k);

// Engquist-Osher numerical flux f^+(uL) + f^-(uR)
double eo_flux(const Flux& f, double u_left, double u_right);

}  // namespace les::nl

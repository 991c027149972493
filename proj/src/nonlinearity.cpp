#include "les/nonlinearity.hpp"

#include <algorithm>
#include <cmath>

namespace les::nl {

PiecewiseLinear::PiecewiseLinear() : PiecewiseLinear({0.0}, {1.0, 1.0}) {}

PiecewiseLinear::PiecewiseLinear(std::vector<double> knots,
                                 std::vector<double> slopes)
    : knots_(std::move(knots)), slopes_(std::move(slopes)) {
  if (slopes_.size() != knots_.size() + 1)
    throw NonlinearityError("need one slope per interval");
  for (std::size_t i = 0; i + 1 < knots_.size(); ++i)
    if (!(knots_[i] < knots_[i + 1]))
      throw NonlinearityError("knots must increase");
  for (double s : slopes_) {
    if (s < 0.0) throw NonlinearityError("diffusion must be nondecreasing");
    lip_ = std::max(lip_, s);
  }
  for (std::size_t i = 0; i + 1 < slopes_.size(); ++i)
    tv_ += std::abs(slopes_[i + 1] - slopes_[i]);
  // anchor values so that value(0) == 0
  vals_.assign(knots_.size(), 0.0);
  for (std::size_t i = 1; i < knots_.size(); ++i)
    vals_[i] = vals_[i - 1] + slopes_[i] * (knots_[i] - knots_[i - 1]);
  // shift by the raw value at 0
  double at0;
  {
    const double u = 0.0;
    auto it = std::upper_bound(knots_.begin(), knots_.end(), u);
    const std::size_t i = static_cast<std::size_t>(it - knots_.begin());
    if (i == 0)
      at0 = vals_.front() + slopes_.front() * (u - knots_.front());
    else
      at0 = vals_[i - 1] + slopes_[i] * (u - knots_[i - 1]);
  }
  for (auto& v : vals_) v -= at0;
}

PiecewiseLinear PiecewiseLinear::identity() { return PiecewiseLinear(); }

PiecewiseLinear PiecewiseLinear::zero() {
  return PiecewiseLinear({0.0}, {0.0, 0.0});
}

PiecewiseLinear PiecewiseLinear::stefan(double latent) {
  return PiecewiseLinear({latent}, {0.0, 1.0});
}

PiecewiseLinear PiecewiseLinear::power(double m, double range, int knots) {
  if (!(m >= 1.0)) throw NonlinearityError("power exponent must be >= 1");
  if (!(range > 0.0) || knots < 8) throw NonlinearityError("bad power spec");
  std::vector<double> ks(static_cast<std::size_t>(knots));
  for (int i = 0; i < knots; ++i)
    ks[static_cast<std::size_t>(i)] =
        -range + 2.0 * range * static_cast<double>(i) / (knots - 1);
  auto f = [m](double u) { return std::copysign(std::pow(std::abs(u), m), u); };
  std::vector<double> slopes(ks.size() + 1);
  for (std::size_t i = 0; i + 1 < ks.size(); ++i)
    slopes[i + 1] = (f(ks[i + 1]) - f(ks[i])) / (ks[i + 1] - ks[i]);
  slopes.front() = slopes[1];
  slopes.back() = slopes[slopes.size() - 2];
  return PiecewiseLinear(std::move(ks), std::move(slopes));
}

double PiecewiseLinear::operator()(double u) const {
  auto it = std::upper_bound(knots_.begin(), knots_.end(), u);
  const std::size_t i = static_cast<std::size_t>(it - knots_.begin());
  if (i == 0) return vals_.front() + slopes_.front() * (u - knots_.front());
  return vals_[i - 1] + slopes_[i] * (u - knots_[i - 1]);
}

double PiecewiseLinear::slope_at(double u) const {
  auto it = std::lower_bound(knots_.begin(), knots_.end(), u);
  return slopes_[static_cast<std::size_t>(it - knots_.begin())];
}

double PiecewiseLinear::entropy_integral(double u, double k) const {
  if (u == k) return 0.0;
  const double lo = std::min(u, k), hi = std::max(u, k);
  const double bk = (*this)(k);
  // walk the knot intervals covering [lo, hi]
  double acc = 0.0;
  double x = lo, bx = (*this)(lo);
  auto it = std::upper_bound(knots_.begin(), knots_.end(), lo);
  std::size_t i = static_cast<std::size_t>(it - knots_.begin());
  while (x < hi) {
    const double nxt = (i < knots_.size()) ? std::min(knots_[i], hi) : hi;
    const double bn = (*this)(nxt);
    // trapezoid of (b - b(k)) over [x, nxt]; exact for linear pieces
    acc += 0.5 * ((bx - bk) + (bn - bk)) * (nxt - x);
    x = nxt;
    bx = bn;
    ++i;
  }
  // H = ∫_k^u (b - b(k)): orientation flips the sign twice when u < k
  return (u > k) ? acc : -acc;
}

Flux Flux::burgers() {
  Flux f;
  f.kind_ = Kind::burgers;
  return f;
}

Flux Flux::linear(double speed) {
  Flux f;
  f.kind_ = Kind::linear;
  f.speed_ = speed;
  return f;
}

double Flux::operator()(double u) const {
  return kind_ == Kind::burgers ? 0.5 * u * u : speed_ * u;
}

double Flux::plus(double u) const {
  if (kind_ == Kind::burgers) return u > 0.0 ? 0.5 * u * u : 0.0;
  return speed_ > 0.0 ? speed_ * u : 0.0;
}

double Flux::minus(double u) const { return (*this)(u)-plus(u); }

double Flux::lipschitz(double lo, double hi) const {
  if (kind_ == Kind::burgers) return std::max(std::abs(lo), std::abs(hi));
  return std::abs(speed_);
}

EntropyPair semi_kruzkov(const Flux& f, double u, double k, int sign) {
  const double d = u - k;
  if (sign > 0) return {pos(d), sgn_pos(d) * (f(u) - f(k))};
  return {neg(d), sgn_neg(d) * (f(u) - f(k))};
}

BoundaryPair boundary_pairs(const Nonlinearity& nl, double u, double uc,
                            double k) {
  BoundaryPair out;
  out.fcal = kruzkov_flux(nl.f, u, uc) + kruzkov_flux(nl.f, u, k) -
             kruzkov_flux(nl.f, uc, k);
  const double bu = nl.b(u), buc = nl.b(uc), bk = nl.b(k);
  out.sigma = std::abs(bu - buc) + std::abs(bu - bk) - std::abs(buc - bk);
  return out;
}

double energy_density(const PiecewiseLinear& b, double u, double k) {
  return b.entropy_integral(u, k);
}

double eo_flux(const Flux& f, double u_left, double u_right) {
  return f.plus(u_left) + f.minus(u_right);
}

}  // namespace les::nl

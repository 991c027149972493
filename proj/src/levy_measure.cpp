#include "les/levy_measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "les/quadrature.hpp"

namespace les::levy {

namespace {

constexpr int kCellsPerDecade = 16;
constexpr double kCellTol = 1e-13;
// Oscillatory handling of the symbol: cells with xi*z below this are
// integrated directly, the rest by integration by parts on cos(xi z) rho(z).
constexpr double kOscSwitch = 4000.0;

double power_z2_integral(const PowerTerm& t, double up_to) {
  // ∫_0^u z^2 * coef z^{-1-alpha} dz = coef u^{2-alpha} / (2-alpha)
  return t.coef * std::pow(up_to, 2.0 - t.alpha) / (2.0 - t.alpha);
}

void merge_edge(std::vector<double>& edges, double v) {
  auto it = std::lower_bound(edges.begin(), edges.end(), v);
  if (it != edges.end() && *it == v) return;
  edges.insert(it, v);
}

std::vector<double> union_edges(const std::vector<double>& a,
                                const std::vector<double>& b) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Oscillatory-aware midpoint ladder: forces enough nodes to resolve the
// phase xi*(hi-lo) before trusting the stabilization test.
template <class F>
double cell_integral_osc(F&& f, double lo, double hi, double phase,
                         double rel_tol) {
  int min_level = 0;
  double need = phase * 1.5;  // ≥ ~4.7 nodes per period
  long n = 1;
  while (static_cast<double>(n) < need && min_level < 11) {
    n *= 3;
    ++min_level;
  }
  const double h = hi - lo;
  double table[16][16];
  n = 1;
  double sum = f(lo + 0.5 * h);
  table[0][0] = sum * h;
  for (int lv = 1; lv < 16; ++lv) {
    n *= 3;
    const double hn = h / static_cast<double>(n);
    double add = 0.0;
    for (long i = 0; i < n; ++i) {
      if (i % 3 == 1) continue;
      add += f(lo + (static_cast<double>(i) + 0.5) * hn);
    }
    sum += add;
    table[lv][0] = sum * hn;
    double p = 9.0;
    for (int j = 1; j <= lv; ++j) {
      table[lv][j] = (p * table[lv][j - 1] - table[lv - 1][j - 1]) / (p - 1.0);
      p *= 9.0;
    }
    if (lv >= min_level + 1) {
      const double cur = table[lv][lv];
      const double prev = table[lv - 1][lv - 1];
      if (std::abs(cur - prev) <= rel_tol * std::abs(cur)) return cur;
    }
    if (lv == 15 || (lv >= min_level + 4)) return table[lv][lv];
  }
  return table[15][15];
}

}  // namespace

double fractional_normalization(double alpha) {
  // C = alpha 2^{alpha-1} Gamma((1+alpha)/2) / (sqrt(pi) Gamma(1-alpha/2)),
  // which makes ∫ (1-cos(xi z)) C |z|^{-1-alpha} dz = |xi|^alpha.
  return alpha * std::pow(2.0, alpha - 1.0) * std::tgamma((1.0 + alpha) / 2.0) /
         (std::sqrt(std::numbers::pi) * std::tgamma(1.0 - alpha / 2.0));
}

void LevyMeasure::build_cells() {
  edges_.clear();
  if (!density_) return;
  const double lo = std::max(z_floor_, restrict_lo_);
  const double hi = std::min(z_max_, restrict_hi_);
  if (!(hi > lo)) return;
  const double decades = std::log10(hi / lo);
  const long n = std::max<long>(1, std::lround(std::ceil(decades * kCellsPerDecade)));
  edges_.resize(static_cast<std::size_t>(n) + 1);
  const double step = decades / static_cast<double>(n);
  for (long i = 0; i <= n; ++i)
    edges_[static_cast<std::size_t>(i)] = lo * std::pow(10.0, step * static_cast<double>(i));
  edges_.front() = lo;
  edges_.back() = hi;
  if (1.0 > lo && 1.0 < hi) merge_edge(edges_, 1.0);
}

double LevyMeasure::density_at(double z) const {
  if (!density_) return 0.0;
  if (z < restrict_lo_ || z >= restrict_hi_) return 0.0;
  return density_(z);
}

double LevyMeasure::density_deriv_at(double z) const {
  if (!deriv_) return 0.0;
  if (z < restrict_lo_ || z >= restrict_hi_) return 0.0;
  return deriv_(z);
}

double LevyMeasure::subfloor_z2(double up_to) const {
  if (small_z_.empty() || restrict_lo_ > 0.0) return 0.0;
  const double u = std::min(up_to, z_floor_);
  if (!(u > 0.0)) return 0.0;
  double s = 0.0;
  for (const auto& t : small_z_) s += power_z2_integral(t, u);
  return s;
}

LevyMeasure LevyMeasure::fractional(double alpha, double z_max) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw InvalidMeasure("fractional order must lie in (0,2)");
  if (!(z_max > 0.0)) throw InvalidMeasure("z_max must be positive");
  LevyMeasure m;
  m.kind_ = Kind::fractional;
  m.z_max_ = z_max;
  const double c = fractional_normalization(alpha);
  m.density_ = [c, alpha](double z) { return c * std::pow(z, -1.0 - alpha); };
  m.deriv_ = [c, alpha](double z) {
    return -c * (1.0 + alpha) * std::pow(z, -2.0 - alpha);
  };
  m.small_z_ = {PowerTerm{c, alpha}};
  m.tail_remainder_ = 2.0 * c * std::pow(z_max, -alpha) / alpha;
  m.build_cells();
  return m;
}

LevyMeasure LevyMeasure::tempered(double alpha, double lambda, double z_max) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw InvalidMeasure("tempered order must lie in (0,2)");
  if (!(lambda > 0.0)) throw InvalidMeasure("tempering rate must be positive");
  LevyMeasure m;
  m.kind_ = Kind::tempered;
  m.z_max_ = z_max;
  const double c = fractional_normalization(alpha);
  m.density_ = [c, alpha, lambda](double z) {
    return c * std::pow(z, -1.0 - alpha) * std::exp(-lambda * z);
  };
  m.deriv_ = [c, alpha, lambda](double z) {
    return -c * std::pow(z, -2.0 - alpha) * std::exp(-lambda * z) *
           (1.0 + alpha + lambda * z);
  };
  // e^{-lambda z} = 1 + O(lambda z_floor) below the floor
  m.small_z_ = {PowerTerm{c, alpha}};
  m.tail_remainder_ =
      2.0 * c * std::pow(z_max, -1.0 - alpha) * std::exp(-lambda * z_max) / lambda;
  m.build_cells();
  return m;
}

LevyMeasure LevyMeasure::compound_poisson(std::vector<Atom> atoms) {
  LevyMeasure m;
  m.kind_ = Kind::compound_poisson;
  for (const auto& a : atoms)
    if (!(a.z > 0.0) || !(a.w > 0.0))
      throw InvalidMeasure("atoms need positive location and weight");
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.z < b.z; });
  m.atoms_ = std::move(atoms);
  m.z_max_ = m.atoms_.empty() ? kDefaultZMax : std::max(kDefaultZMax, m.atoms_.back().z);
  return m;
}

LevyMeasure LevyMeasure::dyadic(int levels) {
  if (levels < 1 || levels > 60) throw InvalidMeasure("dyadic levels out of range");
  LevyMeasure m;
  m.kind_ = Kind::dyadic;
  m.atoms_.reserve(static_cast<std::size_t>(levels) + 1);
  // atoms at 2^{-k} with weight 2^{k-1} per side, k = 0..levels
  for (int k = levels; k >= 0; --k)
    m.atoms_.push_back(Atom{std::ldexp(1.0, -k), std::ldexp(1.0, k - 1)});
  m.z_max_ = kDefaultZMax;
  return m;
}

LevyMeasure LevyMeasure::from_table(std::vector<Atom> atoms,
                                    std::vector<double> z_samples,
                                    std::vector<double> rho_samples) {
  if (z_samples.size() != rho_samples.size())
    throw InvalidMeasure("density table columns differ in length");
  LevyMeasure m;
  m.kind_ = Kind::custom;
  for (const auto& a : atoms)
    if (!(a.z > 0.0) || !(a.w > 0.0))
      throw InvalidMeasure("atoms need positive location and weight");
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.z < b.z; });
  m.atoms_ = std::move(atoms);
  if (!z_samples.empty()) {
    for (std::size_t i = 0; i < z_samples.size(); ++i) {
      if (!(z_samples[i] > 0.0)) throw InvalidMeasure("table abscissae must be positive");
      if (i > 0 && !(z_samples[i] > z_samples[i - 1]))
        throw InvalidMeasure("table abscissae must increase");
      if (rho_samples[i] < 0.0) throw InvalidMeasure("density values must be nonnegative");
    }
    auto zs = std::make_shared<std::vector<double>>(std::move(z_samples));
    auto rs = std::make_shared<std::vector<double>>(std::move(rho_samples));
    m.density_ = [zs, rs](double z) {
      if (z < zs->front() || z > zs->back()) return 0.0;
      auto it = std::upper_bound(zs->begin(), zs->end(), z);
      if (it == zs->begin()) return rs->front();
      const std::size_t i = static_cast<std::size_t>(it - zs->begin());
      if (i >= zs->size()) return rs->back();
      const double t = (z - (*zs)[i - 1]) / ((*zs)[i] - (*zs)[i - 1]);
      return (1.0 - t) * (*rs)[i - 1] + t * (*rs)[i];
    };
    m.z_max_ = std::max(kDefaultZMax, zs->back());
    m.restrict_lo_ = 0.0;
    // nothing below the first sample
    m.z_floor_ = std::max(m.z_floor_, zs->front());
    m.build_cells();
    for (std::size_t i = 0; i < zs->size(); ++i)
      if ((*zs)[i] > m.edges_.front() && (*zs)[i] < m.edges_.back())
        merge_edge(m.edges_, (*zs)[i]);
  } else {
    m.z_max_ = kDefaultZMax;
  }
  return m;
}

LevyMeasure LevyMeasure::from_density(std::function<double(double)> rho,
                                      double z_max,
                                      std::vector<PowerTerm> small_z,
                                      std::function<double(double)> drho) {
  if (!(z_max > 0.0)) throw InvalidMeasure("z_max must be positive");
  for (const auto& t : small_z)
    if (!(t.alpha < 2.0) || !(t.coef >= 0.0))
      throw InvalidMeasure("small-z exponent must lie below 2 with nonnegative weight");
  LevyMeasure m;
  m.kind_ = Kind::custom;
  m.z_max_ = z_max;
  m.density_ = std::move(rho);
  m.deriv_ = std::move(drho);
  m.small_z_ = std::move(small_z);
  m.build_cells();
  return m;
}

LevyMeasure LevyMeasure::scaled(double factor) const {
  if (!(factor > 0.0)) throw InvalidMeasure("scale factor must be positive");
  LevyMeasure m(*this);
  if (density_) {
    auto base = density_;
    m.density_ = [base, factor](double z) { return factor * base(z); };
    if (deriv_) {
      auto dbase = deriv_;
      m.deriv_ = [dbase, factor](double z) { return factor * dbase(z); };
    }
  }
  for (auto& a : m.atoms_) a.w *= factor;
  for (auto& t : m.small_z_) t.coef *= factor;
  m.tail_remainder_ *= factor;
  return m;
}

LevyMeasure LevyMeasure::plus(const LevyMeasure& other) const {
  LevyMeasure m;
  m.kind_ = Kind::custom;
  m.atoms_ = atoms_;
  for (const auto& a : other.atoms_) {
    auto it = std::find_if(m.atoms_.begin(), m.atoms_.end(),
                           [&](const Atom& b) { return b.z == a.z; });
    if (it != m.atoms_.end())
      it->w += a.w;
    else
      m.atoms_.push_back(a);
  }
  std::sort(m.atoms_.begin(), m.atoms_.end(),
            [](const Atom& a, const Atom& b) { return a.z < b.z; });
  if (density_ && other.density_) {
    if (z_max_ != other.z_max_ || z_floor_ != other.z_floor_ ||
        restrict_lo_ != other.restrict_lo_ || restrict_hi_ != other.restrict_hi_)
      throw IncomparableMeasures("densities live on different quadrature layouts");
    auto da = density_, db = other.density_;
    m.density_ = [da, db](double z) { return da(z) + db(z); };
    if (deriv_ && other.deriv_) {
      auto ga = deriv_, gb = other.deriv_;
      m.deriv_ = [ga, gb](double z) { return ga(z) + gb(z); };
    }
    m.edges_ = union_edges(edges_, other.edges_);
  } else if (density_) {
    m.density_ = density_;
    m.deriv_ = deriv_;
    m.edges_ = edges_;
  } else if (other.density_) {
    m.density_ = other.density_;
    m.deriv_ = other.deriv_;
    m.edges_ = other.edges_;
  }
  const LevyMeasure& host = density_ ? *this : other;
  m.z_floor_ = host.z_floor_;
  m.z_max_ = std::max(z_max_, other.z_max_);
  m.restrict_lo_ = host.restrict_lo_;
  m.restrict_hi_ = host.restrict_hi_;
  m.small_z_ = small_z_;
  for (const auto& t : other.small_z_) {
    auto it = std::find_if(m.small_z_.begin(), m.small_z_.end(),
                           [&](const PowerTerm& s) { return s.alpha == t.alpha; });
    if (it != m.small_z_.end())
      it->coef += t.coef;
    else
      m.small_z_.push_back(t);
  }
  m.tail_remainder_ = tail_remainder_ + other.tail_remainder_;
  return m;
}

std::vector<double> LevyMeasure::edges_within(double lo, double hi) const {
  std::vector<double> out;
  if (edges_.empty() || !(hi > lo)) return out;
  const double a = std::max(lo, edges_.front());
  const double b = std::min(hi, edges_.back());
  if (!(b > a)) return out;
  out.push_back(a);
  for (double e : edges_)
    if (e > a && e < b) out.push_back(e);
  out.push_back(b);
  return out;
}

double LevyMeasure::mass_between(double lo, double hi) const {
  double s = 0.0;
  for (const auto& a : atoms_)
    if (a.z >= lo && a.z < hi) s += a.w;
  if (density_) {
    const auto cells = edges_within(std::max(lo, z_floor_), hi);
    s += quad::integral_over_cells([this](double z) { return density_at(z); },
                                   cells, kCellTol);
  }
  return s;
}

std::vector<std::pair<double, double>> LevyMeasure::quantized_cells(
    double lo, double hi) const {
  std::vector<std::pair<double, double>> out;
  if (!density_) return out;
  const auto cells = edges_within(std::max(lo, z_floor_), hi);
  for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
    const double m = quad::cell_integral(
        [this](double z) { return density_at(z); }, cells[i], cells[i + 1],
        kCellTol);
    out.emplace_back(0.5 * (cells[i] + cells[i + 1]), m);
  }
  return out;
}

double LevyMeasure::second_moment_between(double lo, double hi) const {
  double s = 0.0;
  for (const auto& a : atoms_)
    if (a.z >= lo && a.z < hi) s += a.w * a.z * a.z;
  if (density_) {
    if (lo < z_floor_) s += subfloor_z2(hi);
    const auto cells = edges_within(std::max(lo, z_floor_), hi);
    s += quad::integral_over_cells(
        [this](double z) { return z * z * density_at(z); }, cells, kCellTol);
  }
  return s;
}

double LevyMeasure::levy_integrand_mass() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.w * std::min(a.z * a.z, 1.0);
  if (density_) {
    for (const auto& t : small_z_)
      if (t.alpha >= 2.0)
        throw InvalidMeasure("levy integrand mass diverges: small-z order >= 2");
    s += subfloor_z2(1.0);
    const auto cells = edges_within(z_floor_, std::min(z_max_, restrict_hi_));
    s += quad::integral_over_cells(
        [this](double z) { return std::min(z * z, 1.0) * density_at(z); },
        cells, kCellTol);
    // Divergence screen for descriptor-less densities: the z^2-weighted mass
    // per decade must not keep growing toward z = 0.
    if (small_z_.empty() && restrict_lo_ <= z_floor_ && !cells.empty()) {
      double prev = -1.0;
      int growing = 0;
      for (int d = 0; d < 4; ++d) {
        const double a = z_floor_ * std::pow(10.0, d);
        const double b = a * 10.0;
        if (b > cells.back()) break;
        const auto dec = edges_within(a, b);
        const double md = quad::integral_over_cells(
            [this](double z) { return z * z * density_at(z); }, dec, 1e-10);
        if (prev >= 0.0 && prev > md * 1.02 && prev > 1e-300) ++growing;
        prev = md;
      }
      if (growing >= 3)
        throw InvalidMeasure(
            "levy integrand mass diverges under refinement toward z=0");
    }
  }
  return 2.0 * s;
}

double LevyMeasure::small_moment(double r) const {
  if (!(r > 0.0)) throw InvalidMeasure("small_moment needs r > 0");
  return 2.0 * second_moment_between(0.0, r);
}

double LevyMeasure::tail_mass(double r) const {
  if (!(r > 0.0)) throw InvalidMeasure("tail_mass needs r > 0");
  return 2.0 * mass_between(r, std::numeric_limits<double>::infinity());
}

double LevyMeasure::tail_remainder() const { return tail_remainder_; }

double LevyMeasure::symbol_density_part(double xi) const {
  // Resolved region: direct quadrature of (1-cos(xi z)) rho(z).
  // Unresolved oscillatory tail: mass minus an integration-by-parts
  // evaluation of ∫ cos(xi z) rho(z) dz, which needs the density derivative.
  const double lo = std::max(z_floor_, restrict_lo_);
  const double hi = std::min(z_max_, restrict_hi_);
  if (!(hi > lo)) return 0.0;
  double cut = hi;
  if (deriv_ && xi * hi > kOscSwitch) cut = std::max(lo, kOscSwitch / xi);
  // snap the cut to a cell edge
  if (cut < hi) {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), cut);
    cut = (it == edges_.end()) ? hi : *it;
  }
  double s = 0.0;
  const auto resolved = edges_within(lo, cut);
  for (std::size_t i = 0; i + 1 < resolved.size(); ++i) {
    const double a = resolved[i], b = resolved[i + 1];
    const double phase = xi * (b - a);
    auto f = [this, xi](double z) {
      const double t = std::sin(0.5 * xi * z);
      return 2.0 * t * t * density_at(z);
    };
    s += (phase > 3.0) ? cell_integral_osc(f, a, b, phase, 1e-12)
                       : quad::cell_integral(f, a, b, 1e-12, 12);
  }
  if (cut < hi) {
    const auto far = edges_within(cut, hi);
    const double mass = quad::integral_over_cells(
        [this](double z) { return density_at(z); }, far, kCellTol);
    const double cos_part =
        (std::sin(xi * hi) * density_at(hi) - std::sin(xi * cut) * density_at(cut)) / xi +
        (std::cos(xi * hi) * density_deriv_at(hi) -
         std::cos(xi * cut) * density_deriv_at(cut)) /
            (xi * xi);
    s += mass - cos_part;
  }
  return s;
}

double LevyMeasure::symbol(double xi) const {
  if (xi == 0.0) return 0.0;
  xi = std::abs(xi);
  double s = 0.0;
  for (const auto& a : atoms_) {
    const double t = std::sin(0.5 * xi * a.z);
    s += a.w * 2.0 * t * t;
  }
  if (density_) {
    // below the floor: 1 - cos(xi z) ≈ (xi z)^2 / 2
    s += 0.5 * xi * xi * subfloor_z2(z_floor_);
    s += symbol_density_part(xi);
  }
  return std::max(2.0 * s, 0.0);
}

LevyMeasure::CompactnessScan LevyMeasure::compactness_scan(
    const std::vector<double>& ladder, int samples_per_shell,
    double floor) const {
  if (ladder.empty()) throw InvalidMeasure("empty shell ladder");
  for (std::size_t i = 0; i + 1 < ladder.size(); ++i)
    if (!(ladder[i] < ladder[i + 1]))
      throw InvalidMeasure("shell ladder must increase");
  if (samples_per_shell < 1) throw InvalidMeasure("need at least one sample per shell");

  CompactnessScan scan;
  scan.floor = floor;
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const double r0 = ladder[i];
    const double r1 = (i + 1 < ladder.size()) ? ladder[i + 1] : 2.0 * ladder[i];
    ShellMin sm;
    sm.radius = r0;
    sm.min_symbol = std::numeric_limits<double>::infinity();
    auto consider = [&](double xi) {
      const double v = symbol(xi);
      if (v < sm.min_symbol) {
        sm.min_symbol = v;
        sm.arg_min = xi;
      }
    };
    for (int sidx = 0; sidx < samples_per_shell; ++sidx)
      consider(r0 + (sidx + 0.5) * (r1 - r0) / samples_per_shell);
    // resonance candidates xi = 2 pi k / z for each atom location
    for (const auto& a : atoms_) {
      const double kmin = std::ceil(r0 * a.z / two_pi);
      const double kmax = std::floor(r1 * a.z / two_pi);
      int taken = 0;
      for (double k = std::max(1.0, kmin); k <= kmax && taken < 256; ++k, ++taken)
        consider(two_pi * k / a.z);
    }
    scan.shells.push_back(sm);
  }
  scan.minima_increasing = true;
  for (std::size_t i = 0; i + 1 < scan.shells.size(); ++i)
    if (!(scan.shells[i].min_symbol < scan.shells[i + 1].min_symbol))
      scan.minima_increasing = false;
  for (const auto& sh : scan.shells)
    if (sh.min_symbol <= floor) scan.floor_hit = true;
  return scan;
}

MeasureSplit LevyMeasure::truncate(double r) const {
  if (!(r > 0.0)) throw InvalidMeasure("truncate needs r > 0");
  LevyMeasure inner(*this), outer(*this);
  inner.atoms_.clear();
  outer.atoms_.clear();
  for (const auto& a : atoms_)
    (a.z < r ? inner.atoms_ : outer.atoms_).push_back(a);
  inner.restrict_hi_ = std::min(restrict_hi_, r);
  outer.restrict_lo_ = std::max(restrict_lo_, r);
  outer.small_z_.clear();
  if (outer.restrict_lo_ > z_floor_) {
    // nothing of the density below r survives in the outer part
  }
  inner.tail_remainder_ = 0.0;
  if (density_) {
    auto split_edges = [this, r](LevyMeasure& m, double lo, double hi) {
      m.edges_ = edges_within(std::max(lo, z_floor_), hi);
    };
    split_edges(inner, restrict_lo_, inner.restrict_hi_);
    split_edges(outer, outer.restrict_lo_, std::min(restrict_hi_, outer.z_max_));
    if (!inner.edges_.empty() && r > inner.edges_.back()) {
      // r beyond the density range: inner keeps everything
    }
    if (r > z_floor_ && r < z_max_) {
      if (!inner.edges_.empty()) merge_edge(inner.edges_, std::min(r, inner.edges_.back()));
      if (!outer.edges_.empty()) merge_edge(outer.edges_, std::max(r, outer.edges_.front()));
    }
  } else {
    inner.edges_.clear();
    outer.edges_.clear();
  }
  return MeasureSplit{std::move(inner), std::move(outer)};
}

std::optional<double> LevyMeasure::total_mass() const {
  if (density_ || !small_z_.empty()) return std::nullopt;
  double s = 0.0;
  for (const auto& a : atoms_) s += a.w;
  return 2.0 * s;
}

double measure_distance(const LevyMeasure& a, const LevyMeasure& b) {
  double s = 0.0;
  // atoms over the union of locations
  {
    std::size_t i = 0, j = 0;
    while (i < a.atoms_.size() || j < b.atoms_.size()) {
      double za = (i < a.atoms_.size()) ? a.atoms_[i].z
                                        : std::numeric_limits<double>::infinity();
      double zb = (j < b.atoms_.size()) ? b.atoms_[j].z
                                        : std::numeric_limits<double>::infinity();
      double z, dw;
      if (za == zb) {
        z = za;
        dw = std::abs(a.atoms_[i].w - b.atoms_[j].w);
        ++i, ++j;
      } else if (za < zb) {
        z = za;
        dw = a.atoms_[i].w;
        ++i;
      } else {
        z = zb;
        dw = b.atoms_[j].w;
        ++j;
      }
      s += std::min(z * z, 1.0) * dw;
    }
  }
  if (a.density_ || b.density_) {
    if (a.density_ && b.density_) {
      if (a.z_floor_ != b.z_floor_)
        throw IncomparableMeasures(
            "density quadrature floors differ; re-sample onto a common grid");
      if (std::min(a.z_max_, a.restrict_hi_) != std::min(b.z_max_, b.restrict_hi_) &&
          !(a.edges_.empty() || b.edges_.empty())) {
        // allowed as long as one support contains the other and the grids
        // align; the union of edges covers both
      }
    }
    std::vector<double> cells = union_edges(a.edges_, b.edges_);
    auto f = [&](double z) {
      return std::min(z * z, 1.0) * std::abs(a.density_at(z) - b.density_at(z));
    };
    s += quad::integral_over_cells(f, cells, 1e-13);
    // sub-floor power terms, aligned by exponent; a sign change within the
    // merged list would make |difference| non-elementary below the floor
    std::vector<PowerTerm> diff =
        (a.restrict_lo_ <= a.z_floor_) ? a.small_z_ : std::vector<PowerTerm>{};
    const auto& bsub =
        (b.restrict_lo_ <= b.z_floor_) ? b.small_z_ : std::vector<PowerTerm>{};
    for (const auto& t : bsub) {
      auto it = std::find_if(diff.begin(), diff.end(),
                             [&](const PowerTerm& s0) { return s0.alpha == t.alpha; });
      if (it != diff.end())
        it->coef -= t.coef;
      else
        diff.push_back(PowerTerm{-t.coef, t.alpha});
    }
    bool pos = false, neg = false;
    for (const auto& t : diff) {
      if (t.coef > 0) pos = true;
      if (t.coef < 0) neg = true;
    }
    if (pos && neg)
      throw IncomparableMeasures(
          "small-z descriptors cross sign; re-sample onto a common grid");
    const double zf = a.density_ ? a.z_floor_ : b.z_floor_;
    for (const auto& t : diff)
      s += std::abs(power_z2_integral(PowerTerm{std::abs(t.coef), t.alpha},
                                      std::min(zf, 1.0)));
  }
  return 2.0 * s;
}

}  // namespace les::levy

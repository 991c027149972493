#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "les/levy_measure.hpp"

using les::levy::Atom;
using les::levy::fractional_normalization;
using les::levy::LevyMeasure;

namespace {

// independent oracle: composite midpoint on 1e6 log-spaced nodes
double brute_force_integral(const std::function<double(double)>& f, double lo,
                            double hi, long n = 1000000) {
  const double llo = std::log(lo), lhi = std::log(hi);
  const double h = (lhi - llo) / static_cast<double>(n);
  double s = 0.0;
  for (long i = 0; i < n; ++i) {
    const double z = std::exp(llo + (static_cast<double>(i) + 0.5) * h);
    s += f(z) * z;  // d z = z d(log z)
  }
  return s * h;
}

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace

TEST_CASE("fractional normalization matches the closed form at alpha = 1") {
  CHECK(rel_err(fractional_normalization(1.0), 1.0 / std::numbers::pi) < 1e-14);
}

TEST_CASE("levy integrand mass") {
  SUBCASE("dyadic geometric sum") {
    CHECK(std::abs(LevyMeasure::dyadic().levy_integrand_mass() - 2.0) < 1e-12);
  }
  SUBCASE("atom pair outside the unit ball carries its mass") {
    auto mu = LevyMeasure::compound_poisson({Atom{2.0, 0.5}});
    CHECK(mu.levy_integrand_mass() == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("fractional alpha=0.5 against the brute-force oracle") {
    const double alpha = 0.5, zmax = 1e3;
    auto mu = LevyMeasure::fractional(alpha, zmax);
    const double c = fractional_normalization(alpha);
    const double want =
        2.0 * brute_force_integral(
                  [&](double z) {
                    return std::min(z * z, 1.0) * c * std::pow(z, -1.0 - alpha);
                  },
                  1e-14, zmax);
    CHECK(rel_err(mu.levy_integrand_mass(), want) < 1e-6);
  }
  SUBCASE("divergent small-z mass is detected") {
    auto bad = LevyMeasure::from_density(
        [](double z) { return std::pow(z, -3.5); }, 10.0);
    CHECK_THROWS_AS(bad.levy_integrand_mass(), les::levy::InvalidMeasure);
  }
}

TEST_CASE("small moment") {
  SUBCASE("no mass below r") {
    auto mu = LevyMeasure::compound_poisson({Atom{1.0, 3.0}});
    CHECK(mu.small_moment(0.5) == 0.0);
  }
  SUBCASE("fractional alpha=1 closed form sigma_r^2 = 2 C r") {
    auto mu = LevyMeasure::fractional(1.0);
    const double c = fractional_normalization(1.0);
    for (double r : {1e-3, 0.1, 0.9})
      CHECK(rel_err(mu.small_moment(r), 2.0 * c * r) < 1e-8);
  }
  SUBCASE("dyadic partial geometric sum") {
    auto mu = LevyMeasure::dyadic();
    const int j = 3;
    const double r = 1.5 * std::ldexp(1.0, -j);
    CHECK(std::abs(mu.small_moment(r) - std::ldexp(1.0, 1 - j)) < 1e-12);
  }
}

TEST_CASE("tail mass") {
  SUBCASE("compound poisson total mass as r -> 0+") {
    auto mu = LevyMeasure::compound_poisson({Atom{0.5, 1.0}, Atom{2.0, 0.25}});
    CHECK(mu.tail_mass(1e-12) == doctest::Approx(2.5).epsilon(1e-14));
  }
  SUBCASE("fractional closed form with the reported remainder") {
    const double alpha = 0.7;
    auto mu = LevyMeasure::fractional(alpha);
    const double c = fractional_normalization(alpha);
    for (double r : {0.01, 0.5, 3.0}) {
      const double want = 2.0 * c * std::pow(r, -alpha) / alpha;
      CHECK(rel_err(mu.tail_mass(r) + mu.tail_remainder(), want) < 1e-8);
    }
  }
  SUBCASE("dyadic at r=1 keeps only the outermost pair") {
    CHECK(LevyMeasure::dyadic().tail_mass(1.0) == doctest::Approx(1.0));
  }
}

TEST_CASE("symbol") {
  SUBCASE("zero frequency") {
    CHECK(LevyMeasure::fractional(0.8).symbol(0.0) == 0.0);
    CHECK(LevyMeasure::dyadic().symbol(0.0) == 0.0);
  }
  SUBCASE("fractional homogeneity m(2 xi) / m(xi) = 2^alpha") {
    struct Case {
      double alpha, zmax;
    };
    for (const auto& c : {Case{0.5, 3e14}, Case{1.0, 3e7}, Case{1.5, 1e5}}) {
      auto mu = LevyMeasure::fractional(c.alpha, c.zmax);
      for (double xi : {1.0, 2.7, 8.0}) {
        const double ratio = mu.symbol(2.0 * xi) / mu.symbol(xi);
        CHECK(rel_err(ratio, std::pow(2.0, c.alpha)) < 1e-6);
      }
    }
  }
  SUBCASE("fractional symbol equals |xi|^alpha under the normalization") {
    auto mu = LevyMeasure::fractional(1.5, 1e5);
    for (double xi : {0.5, 1.0, 4.0})
      CHECK(rel_err(mu.symbol(xi), std::pow(std::abs(xi), 1.5)) < 2e-6);
  }
  SUBCASE("truncated dyadic vanishes at the resonance frequency") {
    const int j = 6;
    auto mu = LevyMeasure::dyadic(50);
    auto outer = mu.truncate(1.5 * std::ldexp(1.0, -j)).outer;
    const double xi_j = std::numbers::pi * std::ldexp(1.0, j);
    CHECK(outer.symbol(xi_j) <= 1e-9);
  }
  SUBCASE("even and nonnegative") {
    auto mu = LevyMeasure::fractional(1.2, 1e4);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(-50.0, 50.0);
    for (int t = 0; t < 25; ++t) {
      const double xi = d(rng);
      CHECK(mu.symbol(xi) == mu.symbol(-xi));
      CHECK(mu.symbol(xi) >= 0.0);
    }
  }
  SUBCASE("splitting additivity") {
    for (const auto& mu :
         {LevyMeasure::fractional(0.9), LevyMeasure::dyadic()}) {
      auto parts = mu.truncate(0.37);
      for (double xi : {0.3, 2.0, 11.0}) {
        const double whole = mu.symbol(xi);
        const double split = parts.inner.symbol(xi) + parts.outer.symbol(xi);
        CHECK(rel_err(split, whole) < 1e-10);
      }
    }
  }
  SUBCASE("splitting upper bound 2 tail + xi^2/2 sigma^2") {
    auto mu = LevyMeasure::fractional(1.1);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dxi(0.01, 30.0), dr(1e-3, 10.0);
    for (int t = 0; t < 50; ++t) {
      const double xi = dxi(rng), r = dr(rng);
      const double bound =
          2.0 * (mu.tail_mass(r) + mu.tail_remainder()) +
          0.5 * xi * xi * mu.small_moment(r);
      CHECK(mu.symbol(xi) <= bound * (1.0 + 1e-10) + 1e-12);
    }
  }
}

TEST_CASE("measure distance") {
  auto mu = LevyMeasure::fractional(1.0);
  SUBCASE("identical measures") {
    CHECK(les::levy::measure_distance(mu, mu) == 0.0);
  }
  SUBCASE("distance to the truncation equals the small moment") {
    for (int n : {4, 32, 1000}) {
      auto outer = mu.truncate(1.0 / n).outer;
      const double d = les::levy::measure_distance(mu, outer);
      const double want = mu.small_moment(1.0 / n);
      CHECK(rel_err(d, want) < 1e-12);
    }
  }
  SUBCASE("mixture distance is linear in the added component") {
    auto other = LevyMeasure::fractional(0.5);
    const int n = 8;
    auto mix = mu.plus(other.scaled(1.0 / n));
    const double d = les::levy::measure_distance(mu, mix);
    const double want = other.levy_integrand_mass() / n;
    CHECK(rel_err(d, want) < 1e-9);
  }
  SUBCASE("pseudometric on sampled triples") {
    auto a = mu;
    auto b = mu.truncate(0.25).outer;
    auto c = mu.truncate(0.05).outer;
    const double dab = les::levy::measure_distance(a, b);
    const double dba = les::levy::measure_distance(b, a);
    CHECK(dab == dba);
    const double dac = les::levy::measure_distance(a, c);
    const double dbc = les::levy::measure_distance(b, c);
    CHECK(dac <= dab + dbc + 1e-10 * (dab + dbc));
  }
}

TEST_CASE("truncate") {
  SUBCASE("cut beyond the support leaves everything inner") {
    auto mu = LevyMeasure::compound_poisson({Atom{1.0, 2.0}});
    auto parts = mu.truncate(10.0);
    CHECK(parts.outer.atoms().empty());
    CHECK(parts.inner.tail_mass(1e-12) == doctest::Approx(4.0));
  }
  SUBCASE("dyadic at r = 0.75 keeps only the unit pair outside") {
    auto parts = LevyMeasure::dyadic().truncate(0.75);
    REQUIRE(parts.outer.atoms().size() == 1);
    CHECK(parts.outer.atoms()[0].z == 1.0);
    CHECK(parts.outer.atoms()[0].w == 0.5);
  }
  SUBCASE("mass additivity across the cut") {
    auto mu = LevyMeasure::fractional(1.3);
    auto parts = mu.truncate(0.2);
    const double sum = parts.inner.levy_integrand_mass() +
                       parts.outer.levy_integrand_mass();
    CHECK(rel_err(sum, mu.levy_integrand_mass()) < 1e-12);
  }
  SUBCASE("outer tail mass is consistent") {
    auto mu = LevyMeasure::fractional(0.8);
    auto parts = mu.truncate(0.3);
    CHECK(rel_err(parts.outer.tail_mass(1e-12), mu.tail_mass(0.3)) < 1e-12);
  }
}

TEST_CASE("compactness scan") {
  SUBCASE("fractional minima increase along the ladder") {
    auto scan =
        LevyMeasure::fractional(1.0, 1e5).compactness_scan({1.0, 10.0, 100.0}, 64);
    CHECK(scan.minima_increasing);
    CHECK(!scan.floor_hit);
  }
  SUBCASE("truncated dyadic dips to zero at the resonance") {
    const int j = 6;
    auto outer = LevyMeasure::dyadic().truncate(1.5 * std::ldexp(1.0, -j)).outer;
    auto scan = outer.compactness_scan({1.0, 50.0, 150.0}, 32);
    CHECK(scan.floor_hit);
    CHECK(scan.shells.back().min_symbol <= 1e-9);
  }
  SUBCASE("single atom pair resonates at multiples of 2 pi") {
    auto mu = LevyMeasure::compound_poisson({Atom{1.0, 1.0}});
    auto scan = mu.compactness_scan({5.0, 50.0, 500.0}, 16);
    CHECK(scan.floor_hit);
    CHECK(!scan.minima_increasing);
  }
}

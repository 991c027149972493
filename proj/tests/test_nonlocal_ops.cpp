#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "les/nonlocal_ops.hpp"

using les::grid::Closure;
using les::grid::Grid;
using les::grid::GridFunction;
using les::levy::Atom;
using les::levy::LevyMeasure;
using les::ops::JumpKernel;

namespace {

std::shared_ptr<const Grid> test_grid(int n = 64) {
  // wide interior so compact supports plus jumps stay inside the domain
  return std::make_shared<Grid>(-8.0, 8.0, n, -7.5, 7.5, 0.25);
}

GridFunction zero_fn(std::shared_ptr<const Grid> g) {
  return GridFunction(g, 0.0, Closure::constant(0.0));
}

// random values supported on the middle third of the box
GridFunction random_compact(std::shared_ptr<const Grid> g,
                            std::mt19937_64& rng) {
  GridFunction f = zero_fn(g);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  const int n = g->n_cells();
  Eigen::ArrayXd v = Eigen::ArrayXd::Zero(n);
  for (int i = n / 3; i < 2 * n / 3; ++i) v[i] = d(rng);
  f.set_values(v);
  return f;
}

// measure fully inside the box span so all jumps stay on the lattice
LevyMeasure lattice_fractional(double alpha) {
  return LevyMeasure::fractional(alpha, 4.0);
}

double rel_scale(double a, double b) { return std::max({std::abs(a), std::abs(b), 1e-6}); }

}  // namespace

TEST_CASE("apply_outer basics") {
  auto g = test_grid();
  const double h = g->dx();
  auto mu = LevyMeasure::compound_poisson({Atom{h, 0.75}});
  SUBCASE("constants are annihilated") {
    auto c = GridFunction::constant(g, 0.0, 3.0);
    auto out = les::ops::apply_outer(mu, h, c);
    CHECK(out.values().abs().maxCoeff() <= 1e-12 * 3.0 * 1.5);
  }
  SUBCASE("single-cell indicator against the two-term stencil") {
    auto f = zero_fn(g);
    const int i0 = g->n_cells() / 2;
    f.set(i0, 1.0);
    auto out = les::ops::apply_outer(mu, h, f);
    CHECK(out.values()[i0] == doctest::Approx(-1.5).epsilon(1e-13));
    CHECK(out.values()[i0 + 1] == doctest::Approx(0.75).epsilon(1e-13));
    CHECK(out.values()[i0 - 1] == doctest::Approx(0.75).epsilon(1e-13));
  }
  SUBCASE("rejects sub-grid splitting radius") {
    auto f = zero_fn(g);
    CHECK_THROWS_AS(les::ops::apply_outer(mu, 0.25 * h, f),
                    les::ops::OpsError);
  }
}

TEST_CASE("apply_inner basics") {
  auto g = test_grid();
  auto mu = lattice_fractional(1.0);
  const double r = 4.0 * g->dx();
  SUBCASE("affine functions are annihilated") {
    auto f = GridFunction::sampled(
        g, 0.0, [](double x) { return 2.0 * x + 1.0; },
        Closure::of([](double, double x) { return 2.0 * x + 1.0; },
                    [](double, double) { return 0.0; },
                    [](double, double) { return 2.0; }, 0.0, 2.0, 17.0));
    auto out = les::ops::apply_inner(mu, r, f);
    CHECK(out.values().abs().maxCoeff() <= 1e-11);
  }
  SUBCASE("quadratic gives back the half second moment") {
    auto quad = [](double, double x) { return x * x; };
    auto f = GridFunction::sampled(
        g, 0.0, [](double x) { return x * x; },
        Closure::of(quad, [](double, double) { return 0.0; },
                    [](double, double x) { return 2.0 * x; }, 0.0, 16.0, 64.0));
    auto out = les::ops::apply_inner(mu, r, f);
    const double s = mu.small_moment(r);
    for (int i : {10, 32, 50})
      CHECK(out.values()[i] == doctest::Approx(s).epsilon(1e-11));
  }
  SUBCASE("no sub-r mass gives zero") {
    auto mu2 = LevyMeasure::compound_poisson({Atom{1.0, 1.0}});
    auto f = GridFunction::sampled(g, 0.0, [](double x) { return std::sin(x); });
    auto out = les::ops::apply_inner(mu2, 0.5, f);
    CHECK(out.values().abs().maxCoeff() == 0.0);
  }
}

TEST_CASE("bilinear form pointwise") {
  auto g = test_grid();
  const double h = g->dx();
  auto mu = LevyMeasure::compound_poisson({Atom{h, 0.6}});
  SUBCASE("constant second argument vanishes") {
    std::mt19937_64 rng(3);
    auto f = random_compact(g, rng);
    auto c = GridFunction::constant(g, 0.0, 2.5);
    auto out = les::ops::bilinear_form(mu, h, f, c);
    CHECK(out.values().abs().maxCoeff() <= 1e-13);
  }
  SUBCASE("single-cell indicator hand computation") {
    auto f = zero_fn(g);
    const int i0 = g->n_cells() / 2;
    f.set(i0, 1.0);
    auto out = les::ops::bilinear_form(mu, h, f, f);
    CHECK(out.values()[i0] == doctest::Approx(0.6).epsilon(1e-13));
    CHECK(out.values()[i0 + 1] == doctest::Approx(0.3).epsilon(1e-13));
    CHECK(out.values()[i0 - 1] == doctest::Approx(0.3).epsilon(1e-13));
    // integral over the line: 2 w dx
    double total = 0.0;
    for (int i = 0; i < g->n_cells(); ++i) total += out.values()[i];
    CHECK(total * g->dx() == doctest::Approx(2.0 * 0.6 * g->dx()).epsilon(1e-12));
  }
}

TEST_CASE("integration by parts and self-adjointness") {
  auto g = test_grid();
  std::mt19937_64 rng(17);
  for (const auto& mu :
       {lattice_fractional(0.6), lattice_fractional(1.4),
        LevyMeasure::compound_poisson({Atom{3 * g->dx(), 0.8}, Atom{1.1, 0.2}})}) {
    JumpKernel k(mu, *g, g->dx());
    for (int trial = 0; trial < 17; ++trial) {
      auto phi = random_compact(g, rng);
      auto psi = random_compact(g, rng);
      const double a = k.integral_levy_times(phi, psi);
      const double b = k.integral_bilinear(phi, psi);
      CHECK(std::abs(a + b) <= 1e-12 * rel_scale(a, b));
      const double c = k.integral_levy_times(psi, phi);
      CHECK(std::abs(a - c) <= 1e-12 * rel_scale(a, c));
    }
  }
}

TEST_CASE("product rule for the bilinear integral") {
  auto g = test_grid();
  std::mt19937_64 rng(23);
  auto mu = lattice_fractional(1.0);
  JumpKernel k(mu, *g, g->dx());
  auto pointwise_on_line = [&](const GridFunction& a, const GridFunction& b,
                               const GridFunction& w) {
    // ∫ B[a,b] w over the whole line (w compactly supported)
    const int n = g->n_cells();
    const int J = k.n_offsets();
    auto va = [&](long i) { return (i >= 0 && i < n) ? a[(int)i] : 0.0; };
    auto vb = [&](long i) { return (i >= 0 && i < n) ? b[(int)i] : 0.0; };
    const double w_in = k.sigma2() / (2.0 * g->dx() * g->dx());
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      if (w[i] == 0.0) continue;
      double s = 0.5 * w_in *
                 ((va(i + 1) - va(i)) * (vb(i + 1) - vb(i)) +
                  (va(i - 1) - va(i)) * (vb(i - 1) - vb(i)));
      for (int j = 1; j <= J; ++j) {
        const double wj = k.weight(j);
        if (wj == 0.0) continue;
        s += 0.5 * wj *
             ((va(i + j) - va(i)) * (vb(i + j) - vb(i)) +
              (va(i - j) - va(i)) * (vb(i - j) - vb(i)));
      }
      total += s * w[i];
    }
    return total * g->dx();
  };
  for (int trial = 0; trial < 17; ++trial) {
    auto phi = random_compact(g, rng);
    auto psi = random_compact(g, rng);
    auto vth = random_compact(g, rng);
    GridFunction prod = zero_fn(g);
    Eigen::ArrayXd pv = psi.values() * vth.values();
    prod.set_values(pv);
    const double lhs = k.integral_bilinear(phi, prod);
    const double t1 = pointwise_on_line(phi, psi, vth);
    const double t2 = pointwise_on_line(phi, vth, psi);
    CHECK(std::abs(lhs - t1 - t2) <= 1e-12 * rel_scale(lhs, t1 + t2));
  }
}

TEST_CASE("convex inequality pointwise") {
  auto g = test_grid();
  std::mt19937_64 rng(29);
  auto mu = lattice_fractional(1.2);
  JumpKernel k(mu, *g, g->dx());
  for (int trial = 0; trial < 40; ++trial) {
    auto v = random_compact(g, rng);
    GridFunction vp = zero_fn(g);
    Eigen::ArrayXd pos = v.values().max(0.0);
    vp.set_values(pos);
    auto lv = k.apply_outer(v);
    auto lvp = k.apply_outer(vp);
    for (int i = g->interior_begin(); i < g->interior_end(); ++i) {
      const double sg = v[i] > 0.0 ? 1.0 : 0.0;
      CHECK(lv[i] * sg <= lvp[i] + 1e-12);
    }
  }
}

TEST_CASE("energy nonnegativity and consistency") {
  auto g = test_grid();
  std::mt19937_64 rng(31);
  auto mu = lattice_fractional(0.9);
  JumpKernel k(mu, *g, g->dx());
  for (int trial = 0; trial < 10; ++trial) {
    auto phi = random_compact(g, rng);
    const double e = k.energy(phi);
    CHECK(e >= -1e-12);
    // energy agrees with the bilinear integral when no far cells exist
    const double e2 = k.integral_bilinear(phi, phi);
    CHECK(std::abs(e - e2) <= 1e-12 * rel_scale(e, e2));
  }
}

TEST_CASE("cross terms formula and auxiliary product rule") {
  auto gsmall = std::make_shared<Grid>(-4.0, 4.0, 32, -3.75, 3.75, 0.125);
  auto mu = LevyMeasure::compound_poisson(
      {Atom{2.0 * gsmall->dx(), 0.7}, Atom{0.9, 0.3}});
  JumpKernel k(mu, *gsmall, gsmall->dx());
  const int n = gsmall->n_cells();
  const int J = k.n_offsets();
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> d(-1.0, 1.0);

  auto rand_mat = [&]() {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = n / 3; i < 2 * n / 3; ++i)
      for (int j = n / 3; j < 2 * n / 3; ++j) m(i, j) = d(rng);
    return m;
  };
  auto rand_vec = [&]() {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    for (int i = n / 3; i < 2 * n / 3; ++i) v[i] = d(rng);
    return v;
  };
  auto mat_at = [&](const Eigen::MatrixXd& m, long i, long j) {
    return (i >= 0 && j >= 0 && i < n && j < n) ? m(i, j) : 0.0;
  };
  auto vec_at = [&](const Eigen::VectorXd& v, long i) {
    return (i >= 0 && i < n) ? v[i] : 0.0;
  };

  SUBCASE("constant second argument kills the diagonal-shift forms") {
    auto phi = rand_mat();
    // on the box, differences of a constant vanish identically
    Eigen::MatrixXd psi = Eigen::MatrixXd::Constant(n, n, 1.7);
    auto forms = les::ops::cross_forms(mu, gsmall->dx(), *gsmall, phi, psi);
    // interior block: all shifted lookups stay on the box
    for (int i = n / 3; i < 2 * n / 3; ++i)
      for (int j = n / 3; j < 2 * n / 3; ++j) {
        CHECK(forms.b_x_xy(i, j) == 0.0);
        CHECK(forms.b_y_xy(i, j) == 0.0);
      }
  }

  SUBCASE("diagonal form splits into the two partial forms") {
    for (int trial = 0; trial < 6; ++trial) {
      auto phi = rand_mat();
      auto psi = rand_mat();
      // extended sums over the whole lattice plane
      double lhs = 0.0, rhs = 0.0, scale = 0.0;
      for (long i = -J; i < n + J; ++i)
        for (long j = -J; j < n + J; ++j) {
          double sdiag = 0.0, sx = 0.0, sy = 0.0;
          for (int m = 1; m <= J; ++m) {
            const double w = k.weight(m);
            if (w == 0.0) continue;
            for (int sgn = -1; sgn <= 1; sgn += 2) {
              const long di = i + sgn * m, dj = j + sgn * m;
              const double dq = mat_at(psi, di, dj) - mat_at(psi, i, j);
              sdiag += 0.5 * w * (mat_at(phi, di, dj) - mat_at(phi, i, j)) * dq;
              sx += 0.5 * w * (mat_at(phi, di, j) - mat_at(phi, i, j)) * dq;
              sy += 0.5 * w * (mat_at(phi, i, dj) - mat_at(phi, i, j)) * dq;
            }
          }
          lhs += sdiag;
          rhs += sx + sy;
          scale += std::abs(sdiag);
        }
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(scale, 1e-3));
    }
  }

  SUBCASE("auxiliary product rule") {
    // rho depends on x - y through a lattice offset table
    for (int trial = 0; trial < 6; ++trial) {
      auto phi = rand_mat();
      auto zx = rand_vec();
      auto zy = rand_vec();
      std::vector<double> rho_tab(static_cast<std::size_t>(4 * n), 0.0);
      for (auto& v : rho_tab) v = d(rng);
      auto rho = [&](long i, long j) -> double {
        const long s = (i - j) + 2 * n;
        return (s >= 0 && s < 4 * n) ? rho_tab[static_cast<std::size_t>(s)]
                                     : 0.0;
      };
      double lhs = 0.0, rhs1 = 0.0, rhs2 = 0.0, scale = 0.0;
      for (long i = -J; i < n + J; ++i)
        for (long j = -J; j < n + J; ++j) {
          double b_x_xy = 0.0, b_x = 0.0, b_y_rho = 0.0, b_xy = 0.0;
          for (int m = 1; m <= J; ++m) {
            const double w = k.weight(m);
            if (w == 0.0) continue;
            for (int sgn = -1; sgn <= 1; sgn += 2) {
              const long di = i + sgn * m, dj = j + sgn * m;
              const double dphix = mat_at(phi, di, j) - mat_at(phi, i, j);
              b_x_xy += 0.5 * w * dphix *
                        (vec_at(zx, di) * vec_at(zy, dj) -
                         vec_at(zx, i) * vec_at(zy, j));
              b_x += 0.5 * w * dphix * (vec_at(zx, di) - vec_at(zx, i));
              b_y_rho += 0.5 * w * (vec_at(zy, dj) - vec_at(zy, j)) *
                         (rho(i, dj) - rho(i, j));
              b_xy += 0.5 * w * (vec_at(zx, di) - vec_at(zx, i)) *
                      (vec_at(zy, dj) - vec_at(zy, j));
            }
          }
          lhs += b_x_xy * rho(i, j);
          rhs1 += b_x * vec_at(zy, j) * rho(i, j);
          rhs2 += mat_at(phi, i, j) *
                  (b_y_rho * vec_at(zx, i) - b_xy * rho(i, j));
          scale += std::abs(b_x_xy * rho(i, j));
        }
      CHECK(std::abs(lhs - (rhs1 + rhs2)) <= 1e-12 * std::max(scale, 1e-3));
    }
  }
}

#include "les/degenerate_solver.hpp"

#include <cmath>

#include "les/log.hpp"

namespace les::solver {

namespace {

double range_sup_abs(const Problem& p) {
  return std::max(std::abs(p.data_min()), std::abs(p.data_max()));
}

// b(u) as a grid function whose closure is b composed with the exterior data
GridFunction b_of(const GridFunction& u, const Problem& p) {
  const auto& b = p.nl.b;
  const double sup = std::max(std::abs(b(p.data_min())), std::abs(b(p.data_max())));
  return u.mapped([&b](double v) { return b(v); },
                  [&b](double v) { return b.slope_at(v); }, b.lipschitz(), sup);
}

struct StepPlan {
  double dt;
  int steps;
  Certificates cert;
};

StepPlan plan_steps(const Problem& p, const ops::JumpKernel& kernel) {
  const Grid& g = *p.grid;
  const double lf = p.nl.lip_f();
  const double lb = p.nl.lip_b();
  Certificates c;
  c.dt_hyperbolic = (lf > 0.0) ? p.cfl_budget * g.dx() / lf
                               : std::numeric_limits<double>::infinity();
  const double diffusion_rate =
      lb * (kernel.sigma2() / (g.dx() * g.dx()) + 2.0 * kernel.jump_mass());
  const double rate = lf / g.dx() + diffusion_rate;
  c.dt_diffusion = (rate > 0.0) ? 0.9 / rate
                                : std::numeric_limits<double>::infinity();
  double dt = std::min(c.dt_hyperbolic, c.dt_diffusion);
  if (p.dt_request > 0.0) {
    if (p.dt_request > dt * (1.0 + 1e-12)) {
      log::info("requested step violates the monotonicity certificate; "
                "shrinking dt");
      c.dt_shrunk = true;
    } else {
      dt = p.dt_request;
    }
  }
  if (!std::isfinite(dt)) dt = p.horizon;
  int steps = std::max(1, static_cast<int>(std::ceil(p.horizon / dt - 1e-12)));
  c.dt = p.horizon / steps;
  c.combined_value = c.dt * rate;
  c.tail_remainder = kernel.tail_remainder();
  return StepPlan{c.dt, steps, c};
}

}  // namespace

double Problem::data_min() const {
  double m = u0.size() ? u0.minCoeff() : 0.0;
  return std::min(m, -uc.sup_abs());
}

double Problem::data_max() const {
  double m = u0.size() ? u0.maxCoeff() : 0.0;
  return std::max(m, uc.sup_abs());
}

GridFunction Problem::initial_state() const {
  const double budget = std::max(std::abs(data_min()), std::abs(data_max()));
  GridFunction u(grid, 0.0, uc, budget * (1.0 + 1e-9) + 1e-12);
  Eigen::ArrayXd v = u0;
  for (int i = 0; i < grid->n_cells(); ++i)
    if (!grid->is_interior(i)) v[i] = uc(0.0, grid->center(i));
  u.set_values(v);
  return u;
}

SolutionField solve_direct(const Problem& p, Certificates* cert) {
  const Grid& g = *p.grid;
  ops::JumpKernel kernel(p.mu, g, g.dx());
  StepPlan plan = plan_steps(p, kernel);
  if (cert) *cert = plan.cert;

  SolutionField out;
  out.grid = p.grid;
  out.dt = plan.dt;
  out.provenance = "direct";

  hyper::HyperbolicState st{p.initial_state(), 0.0, plan.dt,
                            Eigen::ArrayXd::Zero(g.n_cells())};
  out.times.push_back(0.0);
  out.slices.push_back(st.u.values());
  for (int n = 0; n < plan.steps; ++n) {
    const GridFunction bu = b_of(st.u, p);
    st.source = kernel.apply_outer(bu) + kernel.apply_inner(bu);
    st = hyper::step(st, p.nl, p.uc, p.cfl_budget);
    out.times.push_back(st.t);
    out.slices.push_back(st.u.values());
  }
  return out;
}

FixedPointResult solve_fixed_point(const Problem& p, double tol, int k_max) {
  if (!p.mu.total_mass().has_value())
    throw CertificateError(
        "fixed-point construction needs a finite (atom-only) measure");
  const Grid& g = *p.grid;
  ops::JumpKernel kernel(p.mu, g, g.dx());
  // lattice from the CFL certificate alone; the source is frozen per step
  const double lf = p.nl.lip_f();
  double dt = (lf > 0.0) ? p.cfl_budget * g.dx() / lf : p.horizon;
  if (p.dt_request > 0.0) dt = std::min(dt, p.dt_request);
  const int steps = std::max(1, static_cast<int>(std::ceil(p.horizon / dt - 1e-12)));
  dt = p.horizon / steps;

  // iterate fields share the time lattice; values can exceed the data range
  // by the integrated source, so the write budget accounts for it
  const double mass = *p.mu.total_mass();
  const double b_sup = std::max(std::abs(p.nl.b(p.data_min())),
                                std::abs(p.nl.b(p.data_max())));
  const double src_sup = 2.0 * mass * b_sup;
  const double budget =
      (range_sup_abs(p) + p.horizon * src_sup) * (1.0 + 1e-9) + 1e-12;

  auto empty_field = [&]() {
    SolutionField f;
    f.grid = p.grid;
    f.dt = dt;
    return f;
  };

  // iterate 0: identically zero on the interior, data outside
  SolutionField prev = empty_field();
  prev.provenance = "fixed_point[0]";
  for (int n = 0; n <= steps; ++n) {
    Eigen::ArrayXd v = Eigen::ArrayXd::Zero(g.n_cells());
    const double t = dt * n;
    for (int i = 0; i < g.n_cells(); ++i)
      if (!g.is_interior(i)) v[i] = p.uc(t, g.center(i));
    prev.times.push_back(t);
    prev.slices.push_back(v);
  }

  FixedPointResult res;
  for (int k = 0; k < k_max; ++k) {
    SolutionField cur = empty_field();
    cur.provenance = "fixed_point[" + std::to_string(k + 1) + "]";
    GridFunction u(p.grid, 0.0, p.uc, budget);
    {
      Eigen::ArrayXd v = p.u0;
      for (int i = 0; i < g.n_cells(); ++i)
        if (!g.is_interior(i)) v[i] = p.uc(0.0, g.center(i));
      u.set_values(v);
    }
    hyper::HyperbolicState st{u, 0.0, dt, Eigen::ArrayXd()};
    cur.times.push_back(0.0);
    cur.slices.push_back(st.u.values());
    for (int n = 0; n < steps; ++n) {
      GridFunction vbar(p.grid, st.t, p.uc, budget);
      vbar.set_values(prev.slices[static_cast<std::size_t>(n)]);
      const GridFunction bv = b_of(vbar, p);
      st.source = kernel.apply_outer(bv) + kernel.apply_inner(bv);
      st = hyper::step(st, p.nl, p.uc, p.cfl_budget);
      cur.times.push_back(st.t);
      cur.slices.push_back(st.u.values());
    }
    res.gaps.push_back(sup_l1_distance(cur, prev));
    prev = std::move(cur);
    if (res.gaps.back() < tol && k > 0) {
      res.converged = true;
      break;
    }
  }
  if (!res.converged)
    log::warn("fixed-point iteration stopped at k_max without meeting tol");
  res.field = std::move(prev);
  return res;
}

TruncatedRun run_truncated_sequence(const Problem& p,
                                    const std::vector<int>& n_ladder) {
  for (std::size_t i = 0; i + 1 < n_ladder.size(); ++i)
    if (!(n_ladder[i] < n_ladder[i + 1]))
      throw CertificateError("truncation ladder must increase");
  TruncatedRun run;
  run.ladder = n_ladder;

  // shared lattice: the finest certificate across the ladder
  double dt_shared = std::numeric_limits<double>::infinity();
  std::vector<LevyMeasure> measures;
  for (int n : n_ladder) {
    auto split = p.mu.truncate(1.0 / static_cast<double>(n));
    measures.push_back(std::move(split.outer));
    Problem pn = p;
    pn.mu = measures.back();
    ops::JumpKernel kernel(pn.mu, *p.grid, p.grid->dx());
    dt_shared = std::min(dt_shared, plan_steps(pn, kernel).dt);
  }
  for (std::size_t i = 0; i < measures.size(); ++i) {
    Problem pn = p;
    pn.mu = measures[i];
    pn.dt_request = dt_shared;
    Certificates cert;
    run.fields.push_back(solve_direct(pn, &cert));
    run.fields.back().provenance =
        "truncated[n=" + std::to_string(n_ladder[i]) + "]";
    run.measure_distances.push_back(levy::measure_distance(measures[i], p.mu));
  }
  return run;
}

ViscosityRun run_vanishing_viscosity(const Problem& p, double alpha,
                                     const std::vector<int>& n_ladder) {
  for (std::size_t i = 0; i + 1 < n_ladder.size(); ++i)
    if (!(n_ladder[i] < n_ladder[i + 1]))
      throw CertificateError("viscosity ladder must increase");
  ViscosityRun run;

  Problem hyp = p;
  hyp.nl.b = nl::PiecewiseLinear::zero();
  hyp.mu = LevyMeasure::compound_poisson({});

  std::vector<Problem> members;
  double dt_shared;
  {
    ops::JumpKernel k0(hyp.mu, *p.grid, p.grid->dx());
    dt_shared = plan_steps(hyp, k0).dt;
  }
  for (int n : n_ladder) {
    Problem pn = p;
    pn.mu = LevyMeasure::fractional(alpha).scaled(1.0 / static_cast<double>(n));
    ops::JumpKernel kernel(pn.mu, *p.grid, p.grid->dx());
    dt_shared = std::min(dt_shared, plan_steps(pn, kernel).dt);
    members.push_back(std::move(pn));
  }
  hyp.dt_request = dt_shared;
  run.hyperbolic = solve_direct(hyp);
  run.hyperbolic.provenance = "viscosity[hyperbolic]";
  for (std::size_t i = 0; i < members.size(); ++i) {
    members[i].dt_request = dt_shared;
    run.fields.push_back(solve_direct(members[i]));
    run.fields.back().provenance =
        "viscosity[n=" + std::to_string(n_ladder[i]) + "]";
    run.l1_distances.push_back(
        l1_space_time_distance(run.fields.back(), run.hyperbolic));
  }
  return run;
}

double l1_interior_norm(const Grid& g, const Eigen::ArrayXd& v) {
  double s = 0.0;
  for (int i = g.interior_begin(); i < g.interior_end(); ++i)
    s += std::abs(v[i]);
  return s * g.dx();
}

double l1_space_time_distance(const SolutionField& a, const SolutionField& b) {
  if (a.slices.size() != b.slices.size())
    throw CertificateError("fields live on different time lattices");
  const Grid& g = *a.grid;
  double s = 0.0;
  for (std::size_t n = 0; n + 1 < a.slices.size(); ++n)
    s += l1_interior_norm(g, a.slices[n] - b.slices[n]);
  return s * a.dt;
}

double l2_space_time_distance_of_b(const SolutionField& a,
                                   const SolutionField& b,
                                   const nl::PiecewiseLinear& bfun) {
  if (a.slices.size() != b.slices.size())
    throw CertificateError("fields live on different time lattices");
  const Grid& g = *a.grid;
  double s = 0.0;
  for (std::size_t n = 0; n + 1 < a.slices.size(); ++n) {
    double slice = 0.0;
    for (int i = g.interior_begin(); i < g.interior_end(); ++i) {
      const double d = bfun(a.slices[n][i]) - bfun(b.slices[n][i]);
      slice += d * d;
    }
    s += slice * g.dx();
  }
  return std::sqrt(s * a.dt);
}

double sup_l1_distance(const SolutionField& a, const SolutionField& b) {
  if (a.slices.size() != b.slices.size())
    throw CertificateError("fields live on different time lattices");
  const Grid& g = *a.grid;
  double m = 0.0;
  for (std::size_t n = 0; n < a.slices.size(); ++n)
    m = std::max(m, l1_interior_norm(g, a.slices[n] - b.slices[n]));
  return m;
}

}  // namespace les::solver

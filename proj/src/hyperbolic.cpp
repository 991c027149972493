#include "les/hyperbolic.hpp"

#include <cmath>

#include "les/log.hpp"

namespace les::hyper {

bool cfl_ok(const Grid& g, const nl::Nonlinearity& nl, double dt,
            double budget) {
  return dt * nl.lip_f() / g.dx() <= budget * (1.0 + 1e-12);
}

HyperbolicState step(const HyperbolicState& state, const nl::Nonlinearity& nl,
                     const Closure& uc, double cfl_budget) {
  const Grid& g = state.u.grid();
  if (!cfl_ok(g, nl, state.dt, cfl_budget))
    throw CertificateError("CFL certificate violated; refuse to step");
  const double lam = state.dt / g.dx();
  const double t = state.t;

  // ghost lookup: interior cells read the state, everything else reads the
  // exterior data at the current time
  auto val = [&](int i) -> double {
    if (g.is_interior(i)) return state.u[i];
    return uc(t, g.center(i));
  };

  HyperbolicState next{state.u, state.t + state.dt, state.dt, state.source};
  next.u.set_time(state.t + state.dt);
  Eigen::ArrayXd v = state.u.values();
  for (int i = g.interior_begin(); i < g.interior_end(); ++i) {
    const double fl = nl::eo_flux(nl.f, val(i - 1), val(i));
    const double fr = nl::eo_flux(nl.f, val(i), val(i + 1));
    double un = val(i) - lam * (fr - fl);
    if (state.source.size() > 0) un += state.dt * state.source[i];
    v[i] = un;
  }
  // exterior cells track the data
  for (int i = 0; i < g.n_cells(); ++i)
    if (!g.is_interior(i)) v[i] = uc(next.t, g.center(i));
  next.u.set_values(v);
  return next;
}

Field solve_with_source(const GridFunction& u0, const Closure& uc,
                        const std::function<double(double, double)>& g,
                        double horizon, const nl::Nonlinearity& nl,
                        double dt_request, double cfl_budget) {
  const Grid& gr = u0.grid();
  double dt_max = cfl_budget * gr.dx() / std::max(nl.lip_f(), 1e-300);
  double dt = (dt_request > 0.0) ? std::min(dt_request, dt_max) : dt_max;
  const int steps = std::max(1, static_cast<int>(std::ceil(horizon / dt - 1e-12)));
  dt = horizon / steps;

  Field out;
  out.grid = u0.grid_ptr();
  out.dt = dt;
  out.provenance = "hyperbolic";

  HyperbolicState st{u0, 0.0, dt, Eigen::ArrayXd()};
  {  // pin exterior cells of the initial slice to the data
    Eigen::ArrayXd v = st.u.values();
    for (int i = 0; i < gr.n_cells(); ++i)
      if (!gr.is_interior(i)) v[i] = uc(0.0, gr.center(i));
    st.u.set_values(v);
  }
  if (g) {
    st.source = Eigen::ArrayXd::Zero(gr.n_cells());
    for (int i = 0; i < gr.n_cells(); ++i) st.source[i] = g(0.0, gr.center(i));
  }
  out.times.push_back(0.0);
  out.slices.push_back(st.u.values());
  for (int n = 0; n < steps; ++n) {
    if (g) {
      for (int i = 0; i < gr.n_cells(); ++i)
        st.source[i] = g(st.t, gr.center(i));
    }
    st = step(st, nl, uc, cfl_budget);
    out.times.push_back(st.t);
    out.slices.push_back(st.u.values());
  }
  return out;
}

double l1_interior_distance(const Field& x, const Field& y, int slice) {
  const Grid& g = *x.grid;
  double s = 0.0;
  for (int i = g.interior_begin(); i < g.interior_end(); ++i)
    s += std::abs(x.slices[static_cast<std::size_t>(slice)][i] -
                  y.slices[static_cast<std::size_t>(slice)][i]);
  return s * g.dx();
}

}  // namespace les::hyper

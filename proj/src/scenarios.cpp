#include "les/scenarios.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace les::scenarios {

using config::ConfigError;
using config::RunConfig;

config::RunConfig preset(const std::string& name) {
  RunConfig c;
  c.scenario = name;
  if (name == "constant") {
    c.path = "direct";
    c.horizon = 0.25;
    c.grid = {64, -2.0, 2.0, -1.0, 1.0, 0.5};
    c.measure.kind = "fractional";
    c.measure.alpha = 1.0;
    c.flux.kind = "burgers";
    c.diffusion.kind = "identity";
    c.u0 = {"constant", {0.5}};
    c.uc = {"constant", {0.5}};
  } else if (name == "burgers-riemann") {
    c.path = "direct";
    c.horizon = 1.0;
    c.grid = {200, -3.0, 4.0, -2.0, 3.0, 1.0};
    c.measure.kind = "compound_poisson";
    c.flux.kind = "burgers";
    c.diffusion.kind = "zero";
    c.u0 = {"riemann", {1.0, 0.0, 0.0}};
    c.uc = {"sides", {1.0, 0.0}};
  } else if (name == "linear-inflow") {
    c.path = "direct";
    c.horizon = 0.5;
    c.grid = {200, -2.0, 3.0, -1.0, 2.0, 1.0};
    c.measure.kind = "compound_poisson";
    c.flux.kind = "linear";
    c.flux.speed = 1.0;
    c.diffusion.kind = "zero";
    c.u0 = {"constant", {0.0}};
    c.uc = {"sides", {1.0, 0.0}};
  } else if (name == "fractional-heat") {
    c.path = "direct";
    c.horizon = 0.25;
    c.grid = {200, -2.0, 2.0, -1.0, 1.0, 0.5};
    c.measure.kind = "fractional";
    c.measure.alpha = 1.0;
    c.flux.kind = "linear";
    c.flux.speed = 0.0;
    c.diffusion.kind = "identity";
    c.u0 = {"bump", {0.8, 0.0, 0.6}};
    c.uc = {"constant", {0.0}};
  } else if (name == "burgers-fractional") {
    c.path = "direct";
    c.horizon = 0.4;
    c.grid = {200, -2.0, 2.0, -1.0, 1.0, 0.5};
    c.measure.kind = "fractional";
    c.measure.alpha = 1.0;
    c.flux.kind = "burgers";
    c.diffusion.kind = "identity";
    c.u0 = {"bump", {0.9, -0.2, 0.5}};
    c.uc = {"constant", {0.0}};
  } else if (name == "stefan") {
    c.path = "direct";
    c.horizon = 0.4;
    c.grid = {200, -2.0, 2.0, -1.0, 1.0, 0.5};
    c.measure.kind = "fractional";
    c.measure.alpha = 1.0;
    c.flux.kind = "burgers";
    c.diffusion.kind = "stefan";
    c.diffusion.latent = 0.3;
    c.u0 = {"bump", {0.9, 0.0, 0.5}};
    c.uc = {"constant", {0.0}};
  } else if (name == "viscosity-riemann") {
    c.path = "vanishing_viscosity";
    c.horizon = 0.5;
    c.grid = {400, -3.0, 4.0, -2.0, 3.0, 1.0};
    c.measure.kind = "fractional";
    c.measure.alpha = 1.0;
    c.flux.kind = "burgers";
    c.diffusion.kind = "identity";
    c.u0 = {"riemann", {1.0, 0.0, 0.0}};
    c.uc = {"sides", {1.0, 0.0}};
    c.ladder = {1, 10, 100};
    c.ladder_alpha = 1.0;
  } else {
    throw ConfigError("unknown scenario '" + name + "'");
  }
  return c;
}

std::vector<std::string> preset_names() {
  return {"constant",        "burgers-riemann",    "linear-inflow",
          "fractional-heat", "burgers-fractional", "stefan",
          "viscosity-riemann"};
}

levy::LevyMeasure build_measure(const config::MeasureSpec& spec,
                                const std::string& base_dir) {
  if (spec.kind == "fractional")
    return levy::LevyMeasure::fractional(spec.alpha, spec.z_max);
  if (spec.kind == "tempered")
    return levy::LevyMeasure::tempered(spec.alpha, spec.lambda, spec.z_max);
  if (spec.kind == "dyadic") return levy::LevyMeasure::dyadic(spec.levels);
  std::vector<levy::Atom> atoms;
  for (const auto& a : spec.atoms) atoms.push_back({a.first, a.second});
  if (spec.kind == "compound_poisson")
    return levy::LevyMeasure::compound_poisson(std::move(atoms));
  if (spec.kind == "custom") {
    std::vector<double> zs, rs;
    if (!spec.density_csv.empty()) {
      const std::string path = spec.density_csv.front() == '/'
                                   ? spec.density_csv
                                   : base_dir + "/" + spec.density_csv;
      std::ifstream f(path);
      if (!f) throw ConfigError("cannot open density table '" + path + "'");
      std::string line;
      int ln = 0;
      while (std::getline(f, line)) {
        ++ln;
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream is(line);
        double z, r;
        if (!(is >> z >> r))
          throw ConfigError("density table needs two columns", ln);
        zs.push_back(z);
        rs.push_back(r);
      }
    }
    return levy::LevyMeasure::from_table(std::move(atoms), std::move(zs),
                                         std::move(rs));
  }
  throw ConfigError("unknown measure kind '" + spec.kind + "'");
}

nl::Nonlinearity build_nonlinearity(const config::RunConfig& cfg) {
  nl::Nonlinearity out;
  if (cfg.flux.kind == "burgers")
    out.f = nl::Flux::burgers();
  else
    out.f = nl::Flux::linear(cfg.flux.speed);
  // invariant range from the data presets
  auto span = [](const config::DataSpec& d) -> std::pair<double, double> {
    if (d.kind == "constant") return {d.params.at(0), d.params.at(0)};
    if (d.kind == "riemann" || d.kind == "sides")
      return {std::min(d.params.at(0), d.params.at(1)),
              std::max(d.params.at(0), d.params.at(1))};
    if (d.kind == "bump")
      return {std::min(0.0, d.params.at(0)), std::max(0.0, d.params.at(0))};
    throw ConfigError("unknown data preset '" + d.kind + "'");
  };
  const auto s0 = span(cfg.u0);
  const auto sc = span(cfg.uc);
  out.range_lo = std::min(s0.first, sc.first);
  out.range_hi = std::max(s0.second, sc.second);
  if (out.range_hi <= out.range_lo) out.range_hi = out.range_lo + 1.0;

  const auto& d = cfg.diffusion;
  if (d.kind == "identity")
    out.b = nl::PiecewiseLinear::identity();
  else if (d.kind == "zero")
    out.b = nl::PiecewiseLinear::zero();
  else if (d.kind == "stefan")
    out.b = nl::PiecewiseLinear::stefan(d.latent);
  else
    out.b = nl::PiecewiseLinear::power(
        d.exponent, std::max(std::abs(out.range_lo), std::abs(out.range_hi)));
  return out;
}

grid::Closure build_uc(const config::DataSpec& spec, const config::GridSpec& g) {
  if (spec.kind == "constant") return grid::Closure::constant(spec.params.at(0));
  if (spec.kind == "sides") {
    // left value for x <= a, right value for x >= b, smooth cosine ramp
    // strictly inside the domain
    const double vl = spec.params.at(0), vr = spec.params.at(1);
    const double a = g.a, b = g.b;
    const double pi = 3.14159265358979323846;
    auto val = [=](double, double x) {
      if (x <= a) return vl;
      if (x >= b) return vr;
      const double s = (x - a) / (b - a);
      return vl + (vr - vl) * 0.5 * (1.0 - std::cos(pi * s));
    };
    auto ddx = [=](double, double x) {
      if (x <= a || x >= b) return 0.0;
      const double s = (x - a) / (b - a);
      return (vr - vl) * 0.5 * pi * std::sin(pi * s) / (b - a);
    };
    const double lipx = std::abs(vr - vl) * 0.5 * pi / (b - a);
    return grid::Closure::of(val, [](double, double) { return 0.0; }, ddx, 0.0,
                             lipx, std::max(std::abs(vl), std::abs(vr)));
  }
  if (spec.kind == "bump") {
    const double amp = spec.params.at(0), c = spec.params.at(1),
                 w = spec.params.at(2);
    auto val = [=](double, double x) {
      const double s = (x - c) / w;
      const double q = 1.0 - s * s;
      return q <= 0.0 ? 0.0 : amp * std::exp(1.0 - 1.0 / q);
    };
    auto ddx = [=](double, double x) {
      const double s = (x - c) / w;
      const double q = 1.0 - s * s;
      if (q <= 0.0) return 0.0;
      return amp * std::exp(1.0 - 1.0 / q) * (-2.0 * s / (q * q)) / w;
    };
    return grid::Closure::of(val, [](double, double) { return 0.0; }, ddx, 0.0,
                             2.0 * std::abs(amp) / w, std::abs(amp));
  }
  throw ConfigError("unknown exterior data preset '" + spec.kind + "'");
}

solver::Problem build_problem(const config::RunConfig& cfg,
                              const std::string& base_dir) {
  solver::Problem p;
  p.grid = std::make_shared<grid::Grid>(cfg.grid.box_lo, cfg.grid.box_hi,
                                        cfg.grid.n, cfg.grid.a, cfg.grid.b,
                                        cfg.grid.collar);
  p.nl = build_nonlinearity(cfg);
  p.mu = build_measure(cfg.measure, base_dir);
  p.uc = build_uc(cfg.uc, cfg.grid);
  p.horizon = cfg.horizon;
  p.u0 = Eigen::ArrayXd::Zero(p.grid->n_cells());
  const auto& d = cfg.u0;
  for (int i = 0; i < p.grid->n_cells(); ++i) {
    const double x = p.grid->center(i);
    double v = 0.0;
    if (d.kind == "constant") v = d.params.at(0);
    else if (d.kind == "riemann")
      v = (x < d.params.at(2)) ? d.params.at(0) : d.params.at(1);
    else if (d.kind == "bump") {
      const double s = (x - d.params.at(1)) / d.params.at(2);
      const double q = 1.0 - s * s;
      v = q <= 0.0 ? 0.0 : d.params.at(0) * std::exp(1.0 - 1.0 / q);
    } else if (d.kind == "sides")
      v = (x < 0.5 * (p.grid->a() + p.grid->b())) ? d.params.at(0)
                                                  : d.params.at(1);
    else
      throw ConfigError("unknown initial data preset '" + d.kind + "'");
    p.u0[i] = v;
  }
  return p;
}

}  // namespace les::scenarios

#include "les/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace les::config {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

double to_num(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("expected a number, got '" + s + "'", line);
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += " ";
    s += fmt(v[i]);
  }
  return s;
}

}  // namespace

RunConfig parse(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    std::string s = raw;
    const auto hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("unterminated section header", line);
      section = trim(s.substr(1, s.size() - 2));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value", line);
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    auto nums = [&]() {
      std::vector<double> out;
      for (const auto& t : split_ws(val)) out.push_back(to_num(t, line));
      return out;
    };

    if (section == "run") {
      if (key == "scenario") cfg.scenario = val;
      else if (key == "path") cfg.path = val;
      else if (key == "T") cfg.horizon = to_num(val, line);
      else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_num(val, line));
      else if (key == "out") cfg.out_dir = val;
      else throw ConfigError("unknown key '" + key + "' in [run]", line);
    } else if (section == "grid") {
      if (key == "n") cfg.grid.n = static_cast<int>(to_num(val, line));
      else if (key == "box") {
        auto v = nums();
        if (v.size() != 2) throw ConfigError("box needs two numbers", line);
        cfg.grid.box_lo = v[0];
        cfg.grid.box_hi = v[1];
      } else if (key == "domain") {
        auto v = nums();
        if (v.size() != 2) throw ConfigError("domain needs two numbers", line);
        cfg.grid.a = v[0];
        cfg.grid.b = v[1];
      } else if (key == "collar") cfg.grid.collar = to_num(val, line);
      else throw ConfigError("unknown key '" + key + "' in [grid]", line);
    } else if (section == "measure") {
      if (key == "kind") cfg.measure.kind = val;
      else if (key == "alpha") cfg.measure.alpha = to_num(val, line);
      else if (key == "lambda") cfg.measure.lambda = to_num(val, line);
      else if (key == "z_max") cfg.measure.z_max = to_num(val, line);
      else if (key == "levels") cfg.measure.levels = static_cast<int>(to_num(val, line));
      else if (key == "atoms") {
        cfg.measure.atoms.clear();
        for (const auto& t : split_ws(val)) {
          const auto colon = t.find(':');
          if (colon == std::string::npos)
            throw ConfigError("atoms are z:w pairs", line);
          cfg.measure.atoms.emplace_back(to_num(t.substr(0, colon), line),
                                         to_num(t.substr(colon + 1), line));
        }
      } else if (key == "density_csv") cfg.measure.density_csv = val;
      else throw ConfigError("unknown key '" + key + "' in [measure]", line);
    } else if (section == "flux") {
      if (key == "kind") cfg.flux.kind = val;
      else if (key == "speed") cfg.flux.speed = to_num(val, line);
      else throw ConfigError("unknown key '" + key + "' in [flux]", line);
    } else if (section == "diffusion") {
      if (key == "kind") cfg.diffusion.kind = val;
      else if (key == "m") cfg.diffusion.exponent = to_num(val, line);
      else if (key == "latent") cfg.diffusion.latent = to_num(val, line);
      else throw ConfigError("unknown key '" + key + "' in [diffusion]", line);
    } else if (section == "data") {
      if (key == "u0" || key == "uc") {
        auto toks = split_ws(val);
        if (toks.empty()) throw ConfigError(key + " needs a preset", line);
        DataSpec d;
        d.kind = toks[0];
        d.params.clear();
        for (std::size_t i = 1; i < toks.size(); ++i)
          d.params.push_back(to_num(toks[i], line));
        (key == "u0" ? cfg.u0 : cfg.uc) = d;
      } else throw ConfigError("unknown key '" + key + "' in [data]", line);
    } else if (section == "ladder") {
      if (key == "n") {
        cfg.ladder.clear();
        for (double v : nums()) cfg.ladder.push_back(static_cast<int>(v));
      } else if (key == "alpha") cfg.ladder_alpha = to_num(val, line);
      else throw ConfigError("unknown key '" + key + "' in [ladder]", line);
    } else if (section == "fixed_point") {
      if (key == "tol") cfg.fp_tol = to_num(val, line);
      else if (key == "k_max") cfg.fp_kmax = static_cast<int>(to_num(val, line));
      else throw ConfigError("unknown key '" + key + "' in [fixed_point]", line);
    } else if (section == "verify") {
      if (key == "enabled") cfg.verify.enabled = (val == "true" || val == "1");
      else if (key == "checks") cfg.verify.checks = split_ws(val);
      else if (key == "r_factor") cfg.verify.r_factor = to_num(val, line);
      else if (key == "k_inner") cfg.verify.k_inner = static_cast<int>(to_num(val, line));
      else if (key == "c_res") cfg.verify.c_res = to_num(val, line);
      else if (key == "tol_bc") cfg.verify.tol_bc = to_num(val, line);
      else if (key == "delta_factors") cfg.verify.delta_factors = nums();
      else throw ConfigError("unknown key '" + key + "' in [verify]", line);
    } else {
      throw ConfigError("unknown section [" + section + "]", line);
    }
  }
  return cfg;
}

RunConfig parse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

std::string serialize(const RunConfig& c) {
  std::ostringstream o;
  o << "[run]\n";
  if (!c.scenario.empty()) o << "scenario = " << c.scenario << "\n";
  o << "path = " << c.path << "\n";
  o << "T = " << fmt(c.horizon) << "\n";
  o << "seed = " << c.seed << "\n";
  o << "out = " << c.out_dir << "\n";
  o << "\n[grid]\n";
  o << "n = " << c.grid.n << "\n";
  o << "box = " << fmt(c.grid.box_lo) << " " << fmt(c.grid.box_hi) << "\n";
  o << "domain = " << fmt(c.grid.a) << " " << fmt(c.grid.b) << "\n";
  o << "collar = " << fmt(c.grid.collar) << "\n";
  o << "\n[measure]\n";
  o << "kind = " << c.measure.kind << "\n";
  if (c.measure.kind == "fractional" || c.measure.kind == "tempered")
    o << "alpha = " << fmt(c.measure.alpha) << "\n";
  if (c.measure.kind == "tempered") o << "lambda = " << fmt(c.measure.lambda) << "\n";
  if (c.measure.kind == "fractional" || c.measure.kind == "tempered" ||
      c.measure.kind == "custom")
    o << "z_max = " << fmt(c.measure.z_max) << "\n";
  if (c.measure.kind == "dyadic") o << "levels = " << c.measure.levels << "\n";
  if (!c.measure.atoms.empty()) {
    o << "atoms =";
    for (const auto& a : c.measure.atoms)
      o << " " << fmt(a.first) << ":" << fmt(a.second);
    o << "\n";
  }
  if (!c.measure.density_csv.empty())
    o << "density_csv = " << c.measure.density_csv << "\n";
  o << "\n[flux]\n";
  o << "kind = " << c.flux.kind << "\n";
  if (c.flux.kind == "linear") o << "speed = " << fmt(c.flux.speed) << "\n";
  o << "\n[diffusion]\n";
  o << "kind = " << c.diffusion.kind << "\n";
  if (c.diffusion.kind == "power") o << "m = " << fmt(c.diffusion.exponent) << "\n";
  if (c.diffusion.kind == "stefan") o << "latent = " << fmt(c.diffusion.latent) << "\n";
  o << "\n[data]\n";
  o << "u0 = " << c.u0.kind;
  if (!c.u0.params.empty()) o << " " << fmt_list(c.u0.params);
  o << "\n";
  o << "uc = " << c.uc.kind;
  if (!c.uc.params.empty()) o << " " << fmt_list(c.uc.params);
  o << "\n";
  o << "\n[ladder]\n";
  o << "n =";
  for (int n : c.ladder) o << " " << n;
  o << "\n";
  o << "alpha = " << fmt(c.ladder_alpha) << "\n";
  o << "\n[fixed_point]\n";
  o << "tol = " << fmt(c.fp_tol) << "\n";
  o << "k_max = " << c.fp_kmax << "\n";
  o << "\n[verify]\n";
  o << "enabled = " << (c.verify.enabled ? "true" : "false") << "\n";
  if (!c.verify.checks.empty()) {
    o << "checks =";
    for (const auto& s : c.verify.checks) o << " " << s;
    o << "\n";
  }
  o << "r_factor = " << fmt(c.verify.r_factor) << "\n";
  o << "k_inner = " << c.verify.k_inner << "\n";
  o << "c_res = " << fmt(c.verify.c_res) << "\n";
  o << "tol_bc = " << fmt(c.verify.tol_bc) << "\n";
  o << "delta_factors = " << fmt_list(c.verify.delta_factors) << "\n";
  return o.str();
}

void validate(const RunConfig& c) {
  if (c.path != "direct" && c.path != "fixed_point" &&
      c.path != "truncated_sequence" && c.path != "vanishing_viscosity")
    throw ConfigError("unknown path '" + c.path + "'");
  if (!(c.horizon > 0)) throw ConfigError("horizon must be positive");
  if (c.grid.n < 8) throw ConfigError("grid too coarse");
  if (!(c.grid.box_lo < c.grid.a && c.grid.a < c.grid.b &&
        c.grid.b < c.grid.box_hi))
    throw ConfigError("need box_lo < a < b < box_hi");
  const auto& m = c.measure;
  if (m.kind == "fractional" || m.kind == "tempered") {
    if (!(m.alpha > 0.0 && m.alpha < 2.0))
      throw ConfigError("measure order must lie in (0,2)");
    if (!(m.z_max > 0.0)) throw ConfigError("z_max must be positive");
    if (m.kind == "tempered" && !(m.lambda > 0.0))
      throw ConfigError("tempering rate must be positive");
  } else if (m.kind == "compound_poisson") {
    // empty atom list is the zero measure
  } else if (m.kind == "dyadic") {
    if (m.levels < 1 || m.levels > 60) throw ConfigError("dyadic levels out of range");
  } else if (m.kind == "custom") {
    if (m.atoms.empty() && m.density_csv.empty())
      throw ConfigError("custom measure needs atoms or a density table");
  } else {
    throw ConfigError("unknown measure kind '" + m.kind + "'");
  }
  if (c.flux.kind != "burgers" && c.flux.kind != "linear")
    throw ConfigError("unknown flux '" + c.flux.kind + "'");
  const auto& d = c.diffusion;
  if (d.kind != "identity" && d.kind != "power" && d.kind != "stefan" &&
      d.kind != "zero")
    throw ConfigError("unknown diffusion '" + d.kind + "'");
  if (d.kind == "power" && !(d.exponent >= 1.0))
    throw ConfigError("power exponent must be >= 1");
  if (c.path == "vanishing_viscosity" &&
      !(c.ladder_alpha > 0.0 && c.ladder_alpha < 2.0))
    throw ConfigError("viscosity order must lie in (0,2)");
  for (std::size_t i = 0; i + 1 < c.ladder.size(); ++i)
    if (!(c.ladder[i] < c.ladder[i + 1]))
      throw ConfigError("ladder must increase");
}

}  // namespace les::config

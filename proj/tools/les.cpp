// command-line front end: scenario runs, re-verification of stored fields,
// convergence tables, symbol reports, and truncated-operator sequences
#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>

#include "les/csv.hpp"
#include "les/log.hpp"
#include "les/scenarios.hpp"
#include "les/verifier.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitBadConfig = 2;
constexpr int kExitCertificate = 3;

struct Common {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int jobs = 1;
};

les::config::RunConfig load_config(const Common& c) {
  les::config::RunConfig cfg;
  if (!c.config_path.empty()) {
    cfg = les::config::parse_file(c.config_path);
    if (!cfg.scenario.empty()) {
      // preset defaults, overridden by everything the file sets explicitly
      auto base = les::scenarios::preset(cfg.scenario);
      auto text = les::config::serialize(base);
      // reparse file on top of the preset
      std::ifstream f(c.config_path);
      std::ostringstream ss;
      ss << f.rdbuf();
      cfg = les::config::parse(text + "\n" + ss.str());
    }
  }
  if (!c.out_dir.empty()) cfg.out_dir = c.out_dir;
  if (c.seed_set) cfg.seed = c.seed;
  les::config::validate(cfg);
  return cfg;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json report_to_json(const les::verify::VerificationReport& r) {
  json j;
  j["check"] = r.check;
  j["statement"] = r.statement;
  j["pass"] = r.pass();
  j["skipped"] = r.skipped;
  j["records"] = json::array();
  for (const auto& rec : r.records)
    j["records"].push_back({{"name", rec.name},
                            {"lhs", rec.lhs},
                            {"rhs", rec.rhs},
                            {"tol", rec.tol},
                            {"slack", rec.slack()},
                            {"pass", rec.pass}});
  for (const auto& [k, v] : r.series) j["series"][k] = v;
  return j;
}

void write_reports(const std::string& dir,
                   const std::vector<les::verify::VerificationReport>& reports) {
  std::ofstream txt(dir + "/verification.txt");
  json all = json::array();
  for (const auto& r : reports) {
    txt << "check " << r.check << " (" << r.statement << "): "
        << (r.pass() ? "pass" : "FAIL");
    if (r.skipped) txt << "  [skipped pairs: " << r.skipped << "]";
    txt << "\n";
    for (const auto& rec : r.records)
      txt << "  " << rec.name << "  lhs=" << fmt(rec.lhs)
          << " rhs=" << fmt(rec.rhs) << " tol=" << fmt(rec.tol)
          << " slack=" << fmt(rec.slack()) << " "
          << (rec.pass ? "pass" : "FAIL") << "\n";
    all.push_back(report_to_json(r));
  }
  std::ofstream js(dir + "/verification.json");
  js << all.dump(2) << "\n";
}

std::vector<les::verify::VerificationReport> run_checks(
    const les::solver::Problem& p, const les::solver::SolutionField& field,
    const les::config::RunConfig& cfg, int jobs) {
  const auto& vs = cfg.verify;
  auto family = les::verify::TestFunctionFamily::standard(*p.grid, p.horizon);
  auto kgrid = les::verify::default_k_grid(p.data_min(), p.data_max(), vs.k_inner);
  const double r = vs.r_factor * p.grid->dx();

  std::vector<std::string> names = vs.checks;
  if (names.empty())
    names = {"max_principle", "entropy", "energy", "boundary_integrability"};

  std::vector<std::function<les::verify::VerificationReport()>> tasks;
  for (const auto& name : names) {
    if (name == "entropy")
      tasks.push_back([&, r] {
        return les::verify::check_entropy_inequalities(field, p, family, kgrid,
                                                       r, vs.c_res);
      });
    else if (name == "energy")
      tasks.push_back([&] { return les::verify::check_energy(field, p); });
    else if (name == "boundary_integrability")
      tasks.push_back(
          [&] { return les::verify::check_boundary_integrability(field, p); });
    else if (name == "boundary_condition")
      tasks.push_back([&, r] {
        std::vector<double> deltas;
        for (double f : vs.delta_factors) deltas.push_back(f * p.grid->dx());
        double scale = 0.0;
        for (const auto& s : field.slices)
          scale = std::max(scale, s.abs().maxCoeff());
        return les::verify::check_boundary_condition(
            field, p, deltas, kgrid, family, r,
            vs.tol_bc * std::max(1.0, p.nl.lip_f() * scale));
      });
    else if (name == "max_principle")
      tasks.push_back([&] { return les::verify::check_max_principle(field, p); });
    else if (name == "time_continuity")
      tasks.push_back([&] { return les::verify::check_time_continuity(field, p); });
    else if (name == "mean_lemma")
      tasks.push_back([&] { return les::verify::check_mean_lemma(10000, cfg.seed); });
    else
      throw les::config::ConfigError("unknown check '" + name + "'");
  }

  std::vector<les::verify::VerificationReport> out(tasks.size());
  if (jobs > 1) {
    std::vector<std::future<les::verify::VerificationReport>> futs;
    for (auto& t : tasks)
      futs.push_back(std::async(std::launch::async, t));
    for (std::size_t i = 0; i < futs.size(); ++i) out[i] = futs[i].get();
  } else {
    for (std::size_t i = 0; i < tasks.size(); ++i) out[i] = tasks[i]();
  }
  return out;
}

json measure_metadata(const les::levy::LevyMeasure& mu) {
  json j;
  j["levy_integrand_mass"] = mu.levy_integrand_mass();
  j["tail_remainder"] = mu.tail_remainder();
  j["z_max"] = mu.z_max();
  j["atoms"] = mu.atoms().size();
  return j;
}

int cmd_run(const Common& com) {
  auto cfg = load_config(com);
  auto p = les::scenarios::build_problem(
      cfg, fs::path(com.config_path).parent_path().string());
  fs::create_directories(cfg.out_dir);

  json manifest;
  manifest["config"] = les::config::serialize(cfg);
  manifest["seed"] = cfg.seed;
  manifest["measure"] = measure_metadata(p.mu);
  json artifacts = json::array();

  les::solver::SolutionField primary;
  les::solver::Certificates cert;
  if (cfg.path == "direct") {
    primary = les::solver::solve_direct(p, &cert);
    manifest["certificates"] = {{"dt", cert.dt},
                                {"dt_hyperbolic", cert.dt_hyperbolic},
                                {"dt_diffusion", cert.dt_diffusion},
                                {"combined_value", cert.combined_value},
                                {"tail_remainder", cert.tail_remainder},
                                {"dt_shrunk", cert.dt_shrunk}};
  } else if (cfg.path == "fixed_point") {
    const double tol = cfg.fp_tol > 0.0
                           ? cfg.fp_tol
                           : 1e-8 * p.grid->domain_length() *
                                 std::max(std::abs(p.data_min()),
                                          std::abs(p.data_max()));
    auto res = les::solver::solve_fixed_point(p, tol, cfg.fp_kmax);
    primary = std::move(res.field);
    manifest["fixed_point"] = {{"gaps", res.gaps}, {"converged", res.converged}};
  } else if (cfg.path == "truncated_sequence") {
    auto run = les::solver::run_truncated_sequence(p, cfg.ladder);
    manifest["sequence"] = {{"ladder", run.ladder},
                            {"measure_distances", run.measure_distances}};
    for (std::size_t i = 0; i < run.fields.size(); ++i) {
      const std::string path =
          cfg.out_dir + "/field_n" + std::to_string(cfg.ladder[i]) + ".csv";
      les::csv::write_field(path, run.fields[i], p.nl.b);
      artifacts.push_back(path);
    }
    primary = std::move(run.fields.back());
  } else {  // vanishing_viscosity
    auto run = les::solver::run_vanishing_viscosity(p, cfg.ladder_alpha, cfg.ladder);
    manifest["viscosity"] = {{"ladder", cfg.ladder},
                             {"l1_distances", run.l1_distances}};
    const std::string hyp = cfg.out_dir + "/field_hyperbolic.csv";
    les::csv::write_field(hyp, run.hyperbolic, p.nl.b);
    artifacts.push_back(hyp);
    for (std::size_t i = 0; i < run.fields.size(); ++i) {
      const std::string path =
          cfg.out_dir + "/field_n" + std::to_string(cfg.ladder[i]) + ".csv";
      les::csv::write_field(path, run.fields[i], p.nl.b);
      artifacts.push_back(path);
    }
    primary = std::move(run.fields.back());
  }

  const std::string field_path = cfg.out_dir + "/field.csv";
  les::csv::write_field(field_path, primary, p.nl.b);
  artifacts.push_back(field_path);

  bool checks_pass = true;
  if (cfg.verify.enabled) {
    auto reports = run_checks(p, primary, cfg, com.jobs);
    write_reports(cfg.out_dir, reports);
    artifacts.push_back(cfg.out_dir + "/verification.txt");
    artifacts.push_back(cfg.out_dir + "/verification.json");
    json checks = json::array();
    for (const auto& r : reports) {
      checks.push_back({{"check", r.check}, {"statement", r.statement},
                        {"pass", r.pass()}});
      if (r.gated && !r.pass()) checks_pass = false;
    }
    manifest["checks"] = checks;
  }
  manifest["artifacts"] = artifacts;
  std::ofstream mf(cfg.out_dir + "/manifest.json");
  mf << manifest.dump(2) << "\n";
  return checks_pass ? 0 : 1;
}

int cmd_verify(const Common& com, const std::string& field_path) {
  auto cfg = load_config(com);
  auto p = les::scenarios::build_problem(
      cfg, fs::path(com.config_path).parent_path().string());
  const std::string path =
      field_path.empty() ? cfg.out_dir + "/field.csv" : field_path;
  auto loaded = les::csv::read_field(path);
  if (loaded.slices.empty()) throw std::runtime_error("empty field");
  les::solver::SolutionField field;
  field.grid = p.grid;
  field.times = loaded.times;
  field.slices = loaded.slices;
  field.dt = loaded.times.size() > 1 ? loaded.times[1] - loaded.times[0] : 0.0;
  field.provenance = "loaded";
  if (loaded.slices[0].size() != p.grid->n_cells())
    throw std::runtime_error("stored field does not match the config grid");
  // consistency of the stored b(u) column
  for (int i = 0; i < loaded.slices[0].size(); i += 7) {
    const double want = p.nl.b(loaded.slices[0][i]);
    if (std::abs(want - loaded.b_columns[0][i]) > 1e-10)
      throw std::runtime_error("stored b(u) column disagrees with the config");
  }
  auto reports = run_checks(p, field, cfg, com.jobs);
  fs::create_directories(cfg.out_dir);
  write_reports(cfg.out_dir, reports);
  bool ok = true;
  for (const auto& r : reports) {
    std::cout << r.check << ": " << (r.pass() ? "pass" : "FAIL") << "\n";
    if (r.gated && !r.pass()) ok = false;
  }
  return ok ? 0 : 1;
}

int cmd_convergence(const Common& com, std::vector<int> ns) {
  auto cfg = load_config(com);
  if (ns.empty()) ns = {50, 100, 200};
  std::vector<les::solver::SolutionField> fields;
  std::vector<les::solver::Problem> probs;
  double dt_shared = std::numeric_limits<double>::infinity();
  for (int n : ns) {
    auto c = cfg;
    c.grid.n = n;
    auto p = les::scenarios::build_problem(
        c, fs::path(com.config_path).parent_path().string());
    les::solver::Certificates cert;
    auto f = les::solver::solve_direct(p, &cert);
    dt_shared = std::min(dt_shared, cert.dt);
    probs.push_back(std::move(p));
    (void)f;
  }
  for (std::size_t i = 0; i < probs.size(); ++i) {
    probs[i].dt_request = dt_shared;
    fields.push_back(les::solver::solve_direct(probs[i]));
  }
  std::printf("# N_coarse N_fine l1_distance order\n");
  double prev = 0.0;
  for (std::size_t i = 0; i + 1 < fields.size(); ++i) {
    // inject the coarse field onto the fine grid cell-by-cell
    const auto& fc = fields[i];
    const auto& ff = fields[i + 1];
    const auto& gf = *ff.grid;
    double dist = 0.0;
    for (std::size_t n = 0; n + 1 < ff.slices.size(); ++n) {
      double s = 0.0;
      for (int j = gf.interior_begin(); j < gf.interior_end(); ++j) {
        const int cj = fc.grid->cell_of(gf.center(j));
        s += std::abs(ff.slices[n][j] - fc.slices[n][cj]);
      }
      dist += s * gf.dx();
    }
    dist *= ff.dt;
    const double order = (i > 0 && dist > 0.0) ? std::log2(prev / dist) : 0.0;
    std::printf("%d %d %s %s\n", ns[i], ns[i + 1], fmt(dist).c_str(),
                i > 0 ? fmt(order).c_str() : "-");
    prev = dist;
  }
  return 0;
}

int cmd_symbol(const Common& com, double xi_min, double xi_max, int points) {
  auto cfg = load_config(com);
  auto mu = les::scenarios::build_measure(
      cfg.measure, fs::path(com.config_path).parent_path().string());
  fs::create_directories(cfg.out_dir);
  std::ofstream f(cfg.out_dir + "/symbol.csv");
  f << "xi,m\n";
  for (int i = 0; i < points; ++i) {
    const double xi =
        xi_min + (xi_max - xi_min) * i / std::max(1, points - 1);
    f << fmt(xi) << "," << fmt(mu.symbol(xi)) << "\n";
  }
  auto scan = mu.compactness_scan({1.0, 10.0, 100.0}, 64);
  std::cout << "shell minima:";
  for (const auto& s : scan.shells) std::cout << " " << fmt(s.min_symbol);
  std::cout << "\nminima increasing: " << (scan.minima_increasing ? "yes" : "no")
            << "\nfloor hit: " << (scan.floor_hit ? "yes" : "no") << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1-D nonlocal convection-diffusion solver and estimate checker"};
  app.require_subcommand(1);
  Common com;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", com.config_path, "config file")->required();
    sub->add_option("--out", com.out_dir, "output directory override");
    sub->add_option("--seed", com.seed, "rng seed override")
        ->each([&](const std::string&) { com.seed_set = true; });
    sub->add_option("--jobs", com.jobs, "worker count for fan-out");
  };

  auto* run = app.add_subcommand("run", "solve a scenario and emit artifacts");
  add_common(run);
  auto* verify = app.add_subcommand("verify", "re-check a stored field");
  std::string field_path;
  add_common(verify);
  verify->add_option("--field", field_path, "stored field csv");
  auto* conv = app.add_subcommand("convergence", "self-distance refinement table");
  std::vector<int> ns;
  add_common(conv);
  conv->add_option("--n", ns, "grid ladder");
  auto* sym = app.add_subcommand("symbol", "symbol report for the measure");
  double xi_min = 0.0, xi_max = 16.0;
  int points = 65;
  add_common(sym);
  sym->add_option("--xi-min", xi_min);
  sym->add_option("--xi-max", xi_max);
  sym->add_option("--points", points);
  auto* seq = app.add_subcommand("sequence", "truncated-operator ladder run");
  add_common(seq);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(com);
    if (verify->parsed()) return cmd_verify(com, field_path);
    if (conv->parsed()) return cmd_convergence(com, ns);
    if (sym->parsed()) return cmd_symbol(com, xi_min, xi_max, points);
    if (seq->parsed()) {
      auto cfg = load_config(com);
      cfg.path = "truncated_sequence";
      les::config::validate(cfg);
      Common c2 = com;
      // reuse the run path with the sequence construction
      auto text = les::config::serialize(cfg);
      const std::string tmp = cfg.out_dir + "/.sequence.cfg";
      fs::create_directories(cfg.out_dir);
      std::ofstream(tmp) << text;
      c2.config_path = tmp;
      return cmd_run(c2);
    }
  } catch (const les::config::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const les::levy::InvalidMeasure& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const les::solver::CertificateError& e) {
    std::cerr << "certificate failure: " << e.what() << "\n";
    return kExitCertificate;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace les::config {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what
                                    : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_ = 0;
};

struct MeasureSpec {
  std::string kind = "fractional";  // fractional|tempered|compound_poisson|dyadic|custom
  double alpha = 1.0;
  double lambda = 1.0;
  double z_max = 1e3;
  int levels = 50;
  std::vector<std::pair<double, double>> atoms;  // z:w pairs
  std::string density_csv;                       // custom tabulated density
};

struct FluxSpec {
  std::string kind = "burgers";  // burgers|linear
  double speed = 1.0;
};

struct DiffusionSpec {
  std::string kind = "identity";  // identity|power|stefan|zero
  double exponent = 2.0;
  double latent = 0.5;
};

struct DataSpec {
  // u0: constant c | riemann left right jump_x | bump amp center width
  // uc: constant c | sides left right | bump amp center width  (space only)
  std::string kind = "constant";
  std::vector<double> params = {0.0};
};

struct GridSpec {
  int n = 200;
  double box_lo = -2.0, box_hi = 2.0;
  double a = -1.0, b = 1.0;
  double collar = 0.5;
};

struct VerifySpec {
  bool enabled = false;
  std::vector<std::string> checks;  // entropy energy boundary_integrability boundary_condition
  double r_factor = 4.0;            // splitting radius = r_factor * dx
  int k_inner = 17;
  double c_res = 8.0;
  double tol_bc = 0.05;
  std::vector<double> delta_factors = {24, 16, 10, 7, 5};  // delta = f * dx
};

struct RunConfig {
  std::string scenario;  // optional preset name
  std::string path = "direct";  // direct|fixed_point|truncated_sequence|vanishing_viscosity
  double horizon = 0.5;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  GridSpec grid;
  MeasureSpec measure;
  FluxSpec flux;
  DiffusionSpec diffusion;
  DataSpec u0;
  DataSpec uc;
  std::vector<int> ladder = {1, 10, 100};
  double ladder_alpha = 1.0;
  double fp_tol = 0.0;  // 0: default 1e-8 |domain| ||u0||_inf
  int fp_kmax = 32;
  VerifySpec verify;

  bool operator==(const RunConfig&) const = default;
};

// Sectioned key=value text. parse() reports errors with the line number;
// serialize() emits the canonical form, which parses back to an equal config.
RunConfig parse(const std::string& text);
RunConfig parse_file(const std::string& path);
std::string serialize(const RunConfig& cfg);

void validate(const RunConfig& cfg);  // throws ConfigError

}  // namespace les::config

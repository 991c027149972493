#include "les/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace les::csv {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_field(const std::string& path, const solver::SolutionField& field,
                 const nl::PiecewiseLinear& b) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << "t,x,u,b_of_u\n";
  const grid::Grid& g = *field.grid;
  for (std::size_t n = 0; n < field.slices.size(); ++n) {
    const double t = field.times[n];
    for (int i = 0; i < g.n_cells(); ++i) {
      const double u = field.slices[n][i];
      f << fmt(t) << "," << fmt(g.center(i)) << "," << fmt(u) << ","
        << fmt(b(u)) << "\n";
    }
  }
}

LoadedField read_field(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read '" + path + "'");
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error("empty field file");
  LoadedField out;
  std::vector<double> us, bs, xs;
  double cur_t = 0;
  bool have_t = false;
  auto flush = [&]() {
    if (us.empty()) return;
    out.times.push_back(cur_t);
    Eigen::ArrayXd u(static_cast<Eigen::Index>(us.size()));
    Eigen::ArrayXd bb(static_cast<Eigen::Index>(bs.size()));
    for (std::size_t i = 0; i < us.size(); ++i) {
      u[static_cast<Eigen::Index>(i)] = us[i];
      bb[static_cast<Eigen::Index>(i)] = bs[i];
    }
    out.slices.push_back(std::move(u));
    out.b_columns.push_back(std::move(bb));
    if (out.xs.empty()) out.xs = xs;
    us.clear();
    bs.clear();
    xs.clear();
  };
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream is(line);
    double t, x, u, bu;
    if (!(is >> t >> x >> u >> bu))
      throw std::runtime_error("malformed field row: " + line);
    if (!have_t || t != cur_t) {
      flush();
      cur_t = t;
      have_t = true;
    }
    xs.push_back(x);
    us.push_back(u);
    bs.push_back(bu);
  }
  flush();
  return out;
}

void write_grid_function(const std::string& path, const grid::Grid& g,
                         const Eigen::ArrayXd& values) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << "x,value\n";
  for (int i = 0; i < g.n_cells(); ++i)
    f << fmt(g.center(i)) << "," << fmt(values[i]) << "\n";
}

}  // namespace les::csv

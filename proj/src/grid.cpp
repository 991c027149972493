#include "les/grid.hpp"

#include <cmath>

namespace les::grid {

Grid::Grid(double x_min, double x_max, int n_cells, double a, double b,
           double collar)
    : x_min_(x_min), x_max_(x_max), n_(n_cells), collar_(collar) {
  if (!(x_min < x_max) || n_cells < 4) throw GridError("degenerate box");
  dx_ = (x_max_ - x_min_) / n_;
  if (!(x_min < a && a < b && b < x_max))
    throw GridError("domain must sit strictly inside the box");
  ia_ = static_cast<int>(std::lround((a - x_min_) / dx_));
  ib_ = static_cast<int>(std::lround((b - x_min_) / dx_));
  a_ = x_min_ + ia_ * dx_;
  b_ = x_min_ + ib_ * dx_;
  if (ib_ - ia_ < 1) throw GridError("domain contains no cells after snapping");
  if (ia_ < 1 || ib_ > n_ - 1)
    throw GridError("domain touches the box after snapping");
  const double w = std::min(a_ - x_min_, x_max_ - b_);
  if (collar_ > 0.0 && w + 1e-12 < collar_)
    throw GridError("collar narrower than declared width");
  if (collar_ <= 0.0) collar_ = w;
}

Closure Closure::constant(double c) {
  Closure cl;
  cl.value_ = [c](double, double) { return c; };
  cl.ddt_ = [](double, double) { return 0.0; };
  cl.ddx_ = [](double, double) { return 0.0; };
  cl.lip_t_ = 0.0;
  cl.lip_x_ = 0.0;
  cl.sup_abs_ = std::abs(c);
  return cl;
}

Closure Closure::of(Fn value, Fn ddt, Fn ddx, double lip_t, double lip_x,
                    double sup_abs) {
  Closure cl;
  cl.value_ = std::move(value);
  cl.ddt_ = std::move(ddt);
  cl.ddx_ = std::move(ddx);
  cl.lip_t_ = lip_t;
  cl.lip_x_ = lip_x;
  cl.sup_abs_ = sup_abs;
  return cl;
}

Closure Closure::mapped(std::function<double(double)> f,
                        std::function<double(double)> slope, double lip_f,
                        double sup_abs) const {
  Closure cl;
  auto v = value_;
  cl.value_ = [v, f](double t, double x) { return f(v(t, x)); };
  auto dt = ddt_, dx = ddx_;
  if (slope) {
    cl.ddt_ = [v, dt, slope](double t, double x) {
      return slope(v(t, x)) * dt(t, x);
    };
    cl.ddx_ = [v, dx, slope](double t, double x) {
      return slope(v(t, x)) * dx(t, x);
    };
  } else {
    cl.ddt_ = [](double, double) { return 0.0; };
    cl.ddx_ = [](double, double) { return 0.0; };
  }
  cl.lip_t_ = lip_f * lip_t_;
  cl.lip_x_ = lip_f * lip_x_;
  cl.sup_abs_ = sup_abs;
  return cl;
}

GridFunction::GridFunction(std::shared_ptr<const Grid> grid, double time,
                           Closure closure, double linf_budget)
    : grid_(std::move(grid)),
      time_(time),
      v_(Eigen::ArrayXd::Zero(grid_->n_cells())),
      closure_(std::move(closure)),
      budget_(linf_budget) {}

GridFunction GridFunction::constant(std::shared_ptr<const Grid> grid,
                                    double time, double c) {
  GridFunction g(grid, time, Closure::constant(c));
  g.v_.setConstant(c);
  g.check_budget();
  return g;
}

GridFunction GridFunction::sampled(std::shared_ptr<const Grid> grid,
                                   double time,
                                   const std::function<double(double)>& f,
                                   Closure closure) {
  GridFunction g(std::move(grid), time, std::move(closure));
  for (int i = 0; i < g.grid().n_cells(); ++i) g.v_[i] = f(g.grid().center(i));
  g.check_budget();
  return g;
}

void GridFunction::check_budget() const {
  if (!std::isfinite(budget_)) return;
  if (v_.size() > 0 && v_.abs().maxCoeff() > budget_ * (1.0 + 1e-12) + 1e-300)
    throw GridError("grid function exceeds its sup-norm budget");
}

void GridFunction::set(int i, double value) {
  v_[i] = value;
  if (std::isfinite(budget_) && std::abs(value) > budget_ * (1.0 + 1e-12))
    throw GridError("grid function exceeds its sup-norm budget");
}

void GridFunction::set_values(const Eigen::ArrayXd& values) {
  v_ = values;
  check_budget();
}

GridFunction GridFunction::mapped(const std::function<double(double)>& f,
                                  const std::function<double(double)>& slope,
                                  double lip_f, double sup_abs) const {
  GridFunction out(grid_, time_, closure_.mapped(f, slope, lip_f, sup_abs),
                   std::numeric_limits<double>::infinity());
  for (int i = 0; i < v_.size(); ++i) out.v_[i] = f(v_[i]);
  return out;
}

}  // namespace les::grid

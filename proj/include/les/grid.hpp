#pragma once

#include <Eigen/Core>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>

namespace les::grid {

class GridError : public std::runtime_error {
 public:
  explicit GridError(const std::string& what) : std::runtime_error(what) {}
};

// Uniform 1-D cell grid over a computational box [x_min, x_max] that contains
// the domain (a, b) plus an exterior collar on both sides. The domain
// endpoints are snapped to cell boundaries at construction.
class Grid {
 public:
  Grid(double x_min, double x_max, int n_cells, double a, double b,
       double collar = 0.0);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  int n_cells() const { return n_; }
  double dx() const { return dx_; }
  double a() const { return a_; }
  double b() const { return b_; }
  double collar() const { return collar_; }
  double domain_length() const { return b_ - a_; }

  int interior_begin() const { return ia_; }
  int interior_end() const { return ib_; }  // one past the last interior cell
  int n_interior() const { return ib_ - ia_; }

  double center(int i) const { return x_min_ + (i + 0.5) * dx_; }
  double left_edge(int i) const { return x_min_ + i * dx_; }
  bool is_interior(int i) const { return i >= ia_ && i < ib_; }
  bool in_box(double x) const { return x >= x_min_ && x < x_max_; }
  int cell_of(double x) const {
    return static_cast<int>(std::floor((x - x_min_) / dx_));
  }

  bool operator==(const Grid& o) const {
    return x_min_ == o.x_min_ && x_max_ == o.x_max_ && n_ == o.n_ &&
           a_ == o.a_ && b_ == o.b_;
  }

 private:
  double x_min_, x_max_;
  int n_;
  double dx_;
  double a_, b_;
  double collar_;
  int ia_, ib_;
};

// Analytic space-time function used to evaluate grid functions beyond the
// box (and, for exterior data, inside the collar). Presets supply exact
// derivatives and Lipschitz metadata.
class Closure {
 public:
  using Fn = std::function<double(double t, double x)>;

  Closure() : Closure(constant(0.0)) {}

  static Closure constant(double c);
  static Closure of(Fn value, Fn ddt, Fn ddx, double lip_t, double lip_x,
                    double sup_abs);

  double operator()(double t, double x) const { return value_(t, x); }
  double ddt(double t, double x) const { return ddt_(t, x); }
  double ddx(double t, double x) const { return ddx_(t, x); }
  double lipschitz_t() const { return lip_t_; }
  double lipschitz_x() const { return lip_x_; }
  double sup_abs() const { return sup_abs_; }

  // Pointwise image under a scalar map with the stated bounds; keeps
  // derivative information via the chain rule when `slope` is provided.
  Closure mapped(std::function<double(double)> f,
                 std::function<double(double)> slope, double lip_f,
                 double sup_abs) const;

 private:
  Fn value_, ddt_, ddx_;
  double lip_t_ = 0, lip_x_ = 0, sup_abs_ = 0;
};

// Cell-constant values on the box plus an analytic exterior closure carrying
// evaluation beyond the box. Values are checked against a stored sup-norm
// budget on write.
class GridFunction {
 public:
  GridFunction(std::shared_ptr<const Grid> grid, double time, Closure closure,
               double linf_budget = std::numeric_limits<double>::infinity());

  static GridFunction constant(std::shared_ptr<const Grid> grid, double time,
                               double c);
  static GridFunction sampled(std::shared_ptr<const Grid> grid, double time,
                              const std::function<double(double)>& f,
                              Closure closure = Closure::constant(0.0));

  const Grid& grid() const { return *grid_; }
  std::shared_ptr<const Grid> grid_ptr() const { return grid_; }
  double time() const { return time_; }
  const Closure& closure() const { return closure_; }
  double linf_budget() const { return budget_; }

  const Eigen::ArrayXd& values() const { return v_; }
  double operator[](int i) const { return v_[i]; }

  void set(int i, double value);
  void set_values(const Eigen::ArrayXd& values);
  void set_time(double t) { time_ = t; }

  // lattice-wide lookup: cells inside the box read the stored value,
  // anything else goes through the closure at this function's time
  double at(long i) const {
    if (i >= 0 && i < v_.size()) return v_[static_cast<int>(i)];
    return closure_(time_, grid_->center(static_cast<int>(i)));
  }
  double value(double x) const {
    if (grid_->in_box(x)) return v_[grid_->cell_of(x)];
    return closure_(time_, x);
  }

  // image under a scalar map, with the closure mapped alongside
  GridFunction mapped(const std::function<double(double)>& f,
                      const std::function<double(double)>& slope, double lip_f,
                      double sup_abs) const;

 private:
  void check_budget() const;

  std::shared_ptr<const Grid> grid_;
  double time_;
  Eigen::ArrayXd v_;
  Closure closure_;
  double budget_;
};

}  // namespace les::grid

#pragma once

#include <Eigen/Core>
#include <vector>

#include "les/grid.hpp"
#include "les/levy_measure.hpp"

namespace les::ops {

using grid::Grid;
using grid::GridFunction;
using levy::LevyMeasure;

class OpsError : public std::runtime_error {
 public:
  explicit OpsError(const std::string& what) : std::runtime_error(what) {}
};

// Grid realization of the split operator pair at radius r >= dx:
//  - jump part: quantized offsets j with weight w_j = mu(cell_j ∩ {|z|>=r})
//    per side, far cells (beyond the box span, up to z_max) kept as measure
//    cells evaluated through the closure,
//  - sub-r part: sigma_r^2 = ∫_{|z|<r} z^2 dmu feeding the weighted second
//    difference (sigma^2/2) D^2_h.
// All off-diagonal weights are nonnegative, so the assembled operator is
// monotone.
class JumpKernel {
 public:
  JumpKernel(const LevyMeasure& mu, const Grid& grid, double r);

  double r() const { return r_; }
  double dx() const { return dx_; }
  double sigma2() const { return sigma2_; }
  // total quantized jump mass mu({r <= |z|}), both sides, up to z_max
  double jump_mass() const { return jump_mass_; }
  // reported remainder beyond z_max (enters error accounting, not values)
  double tail_remainder() const { return tail_remainder_; }
  int n_offsets() const { return static_cast<int>(w_.size()); }
  double weight(int j) const { return w_[static_cast<std::size_t>(j) - 1]; }
  const std::vector<double>& far_z() const { return far_z_; }
  const std::vector<double>& far_w() const { return far_w_; }
  // bound on the L^1 -> L^1 norm of the assembled operator
  double l1_operator_bound() const {
    return 2.0 * (jump_mass_ + sigma2_ / (dx_ * dx_));
  }

  // L^{>=r}[phi] on every box cell (meaningful on interior cells; exterior
  // cells are evaluated the same way for whole-line integral bookkeeping)
  Eigen::ArrayXd apply_outer(const GridFunction& phi) const;
  // (sigma_r^2 / 2) D^2_h phi
  Eigen::ArrayXd apply_inner(const GridFunction& phi) const;
  // pointwise B^{>=r}[phi,psi] + symmetrized sub-r part
  Eigen::ArrayXd bilinear(const GridFunction& phi, const GridFunction& psi)
      const;
  // pointwise jump part only (no sub-r term)
  Eigen::ArrayXd bilinear_outer(const GridFunction& phi,
                                const GridFunction& psi) const;
  // pointwise sub-r part only
  Eigen::ArrayXd bilinear_inner(const GridFunction& phi,
                                const GridFunction& psi) const;

  // Whole-line integrals for compactly supported grid functions with zero
  // closure; exact discrete rearrangement partners of each other. They
  // require every jump to stay on the quantized lattice (no far cells).
  double integral_levy_times(const GridFunction& phi,
                             const GridFunction& psi) const;
  double integral_bilinear(const GridFunction& phi,
                           const GridFunction& psi) const;
  // ∫ B[phi,phi] over the whole line for functions vanishing outside the
  // domain (closure zero); includes far-cell contributions.
  double energy(const GridFunction& phi) const;

 private:
  double value_at(const GridFunction& phi, long i) const { return phi.at(i); }

  const Grid* grid_;
  double r_, dx_;
  double sigma2_ = 0;
  double jump_mass_ = 0;
  double tail_remainder_ = 0;
  std::vector<double> w_;       // offsets 1..J (one side)
  std::vector<double> w_tail_;  // w_tail_[j] = sum of w_ beyond offset j
  std::vector<double> far_z_, far_w_;  // far cells (one side)
};

// Free-function forms matching the operator contracts; each builds the
// kernel for (mu, grid, r) on the fly.
GridFunction apply_outer(const LevyMeasure& mu, double r,
                         const GridFunction& phi);
GridFunction apply_inner(const LevyMeasure& mu, double r,
                         const GridFunction& phi);
GridFunction bilinear_form(const LevyMeasure& mu, double r,
                           const GridFunction& phi, const GridFunction& psi);

// integral over the domain interior of a cellwise quantity
double integral_interior(const Grid& g, const Eigen::ArrayXd& cellwise);
double integral_box(const Grid& g, const Eigen::ArrayXd& cellwise);
double l1_interior(const Grid& g, const Eigen::ArrayXd& cellwise);

// Tensor-grid forms used to exercise the two-variable identities at small
// sizes. Both variables share the 1-D grid; functions are zero off the box.
struct TensorForms {
  Eigen::MatrixXd b_x_xy;  // B_{x,x+y}[phi,psi]
  Eigen::MatrixXd b_y_xy;  // B_{y,x+y}[phi,psi]
  Eigen::MatrixXd b_xy;    // B_{x,y}[phi,psi]
};
TensorForms cross_forms(const LevyMeasure& mu, double r, const Grid& g,
                        const Eigen::MatrixXd& phi, const Eigen::MatrixXd& psi);

// companions for the identity tests
Eigen::MatrixXd tensor_diag_form(const LevyMeasure& mu, double r,
                                 const Grid& g, const Eigen::MatrixXd& phi,
                                 const Eigen::MatrixXd& psi);  // B_{x+y}
Eigen::MatrixXd tensor_b_x(const LevyMeasure& mu, double r, const Grid& g,
                           const Eigen::MatrixXd& phi,
                           const Eigen::MatrixXd& psi);  // B acting in x only
Eigen::MatrixXd tensor_b_y(const LevyMeasure& mu, double r, const Grid& g,
                           const Eigen::MatrixXd& phi,
                           const Eigen::MatrixXd& psi);  // B acting in y only

}  // namespace les::ops

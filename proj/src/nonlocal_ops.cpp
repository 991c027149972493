#include "les/nonlocal_ops.hpp"

#include <cmath>

namespace les::ops {

JumpKernel::JumpKernel(const LevyMeasure& mu, const Grid& grid, double r)
    : grid_(&grid), r_(r), dx_(grid.dx()) {
  if (!(r >= dx_ * (1.0 - 1e-12)))
    throw OpsError("splitting radius below grid scale; split at r = dx and "
                   "route the sub-grid part through apply_inner");
  sigma2_ = mu.small_moment(r);
  const int J = grid.n_cells();
  w_.assign(static_cast<std::size_t>(J), 0.0);
  const double span_end = (static_cast<double>(J) + 0.5) * dx_;
  for (int j = 1; j <= J; ++j) {
    const double lo = std::max(r, (j - 0.5) * dx_);
    const double hi = (j + 0.5) * dx_;
    if (hi > lo) w_[static_cast<std::size_t>(j - 1)] = mu.mass_between(lo, hi);
  }
  for (const auto& cell : mu.quantized_cells(std::max(r, span_end),
                                             mu.z_max())) {
    far_z_.push_back(cell.first);
    far_w_.push_back(cell.second);
  }
  for (const auto& a : mu.atoms())
    if (a.z >= std::max(r, span_end)) {
      far_z_.push_back(a.z);
      far_w_.push_back(a.w);
    }
  double one_side = 0.0;
  for (double w : w_) one_side += w;
  for (double w : far_w_) one_side += w;
  jump_mass_ = 2.0 * one_side;
  tail_remainder_ = mu.tail_remainder();
}

Eigen::ArrayXd JumpKernel::apply_outer(const GridFunction& phi) const {
  const int n = grid_->n_cells();
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(n);
  const int J = n_offsets();
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    const double ci = phi[i];
    for (int j = 1; j <= J; ++j) {
      const double w = w_[static_cast<std::size_t>(j - 1)];
      if (w == 0.0) continue;
      s += w * (phi.at(i + j) + phi.at(i - static_cast<long>(j)) - 2.0 * ci);
    }
    if (!far_z_.empty()) {
      const double xi = grid_->center(i);
      const double t = phi.time();
      for (std::size_t f = 0; f < far_z_.size(); ++f)
        s += far_w_[f] * (phi.closure()(t, xi + far_z_[f]) +
                          phi.closure()(t, xi - far_z_[f]) - 2.0 * ci);
    }
    out[i] = s;
  }
  return out;
}

Eigen::ArrayXd JumpKernel::apply_inner(const GridFunction& phi) const {
  const int n = grid_->n_cells();
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(n);
  const double w_in = sigma2_ / (2.0 * dx_ * dx_);
  if (w_in == 0.0) return out;
  for (int i = 0; i < n; ++i)
    out[i] = w_in * (phi.at(i + 1) + phi.at(i - 1) - 2.0 * phi[i]);
  return out;
}

Eigen::ArrayXd JumpKernel::bilinear_outer(const GridFunction& phi,
                                          const GridFunction& psi) const {
  const int n = grid_->n_cells();
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(n);
  const int J = n_offsets();
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    const double pi = phi[i], qi = psi[i];
    for (int j = 1; j <= J; ++j) {
      const double w = w_[static_cast<std::size_t>(j - 1)];
      if (w == 0.0) continue;
      s += 0.5 * w *
           ((phi.at(i + j) - pi) * (psi.at(i + j) - qi) +
            (phi.at(i - static_cast<long>(j)) - pi) *
                (psi.at(i - static_cast<long>(j)) - qi));
    }
    if (!far_z_.empty()) {
      const double xi = grid_->center(i);
      const double t = phi.time();
      for (std::size_t f = 0; f < far_z_.size(); ++f) {
        const double zp = xi + far_z_[f], zm = xi - far_z_[f];
        s += 0.5 * far_w_[f] *
             ((phi.closure()(t, zp) - pi) * (psi.closure()(psi.time(), zp) - qi) +
              (phi.closure()(t, zm) - pi) * (psi.closure()(psi.time(), zm) - qi));
      }
    }
    out[i] = s;
  }
  return out;
}

Eigen::ArrayXd JumpKernel::bilinear_inner(const GridFunction& phi,
                                          const GridFunction& psi) const {
  const int n = grid_->n_cells();
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(n);
  const double w_in = sigma2_ / (2.0 * dx_ * dx_);
  if (w_in == 0.0) return out;
  for (int i = 0; i < n; ++i) {
    const double fp = phi.at(i + 1) - phi[i];
    const double fm = phi.at(i - 1) - phi[i];
    const double gp = psi.at(i + 1) - psi[i];
    const double gm = psi.at(i - 1) - psi[i];
    out[i] = 0.5 * w_in * (fp * gp + fm * gm);
  }
  return out;
}

Eigen::ArrayXd JumpKernel::bilinear(const GridFunction& phi,
                                    const GridFunction& psi) const {
  return bilinear_outer(phi, psi) + bilinear_inner(phi, psi);
}

double JumpKernel::integral_levy_times(const GridFunction& phi,
                                       const GridFunction& psi) const {
  if (!far_z_.empty())
    throw OpsError("whole-line integral needs all jumps on the lattice; "
                   "use a measure supported within the box span");
  const int n = grid_->n_cells();
  const int J = n_offsets();
  auto v = [&](long i) -> double {
    return (i >= 0 && i < n) ? phi[static_cast<int>(i)] : 0.0;
  };
  const double w_in = sigma2_ / (2.0 * dx_ * dx_);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double qi = psi[i];
    if (qi == 0.0) continue;
    double s = w_in * (v(i + 1) + v(i - 1) - 2.0 * v(i));
    for (int j = 1; j <= J; ++j) {
      const double w = w_[static_cast<std::size_t>(j - 1)];
      if (w == 0.0) continue;
      s += w * (v(i + j) + v(i - j) - 2.0 * v(i));
    }
    total += s * qi;
  }
  return total * dx_;
}

double JumpKernel::integral_bilinear(const GridFunction& phi,
                                     const GridFunction& psi) const {
  if (!far_z_.empty())
    throw OpsError("whole-line integral needs all jumps on the lattice; "
                   "use a measure supported within the box span");
  const int n = grid_->n_cells();
  const int J = n_offsets();
  auto vp = [&](long i) -> double {
    return (i >= 0 && i < n) ? phi[static_cast<int>(i)] : 0.0;
  };
  auto vq = [&](long i) -> double {
    return (i >= 0 && i < n) ? psi[static_cast<int>(i)] : 0.0;
  };
  const double w_in = sigma2_ / (2.0 * dx_ * dx_);
  double total = 0.0;
  for (long i = -J - 1; i < static_cast<long>(n) + J + 1; ++i) {
    double s = 0.5 * w_in *
               ((vp(i + 1) - vp(i)) * (vq(i + 1) - vq(i)) +
                (vp(i - 1) - vp(i)) * (vq(i - 1) - vq(i)));
    for (int j = 1; j <= J; ++j) {
      const double w = w_[static_cast<std::size_t>(j - 1)];
      if (w == 0.0) continue;
      s += 0.5 * w *
           ((vp(i + j) - vp(i)) * (vq(i + j) - vq(i)) +
            (vp(i - j) - vp(i)) * (vq(i - j) - vq(i)));
    }
    total += s;
  }
  return total * dx_;
}

double JumpKernel::energy(const GridFunction& phi) const {
  // ∫_R B[phi,phi] dx for phi vanishing outside the box: correlation form
  // per lattice offset plus a no-overlap term for far cells.
  const int n = grid_->n_cells();
  const int J = n_offsets();
  double sq = 0.0;
  for (int i = 0; i < n; ++i) sq += phi[i] * phi[i];
  double total = 0.0;
  {  // sub-r part: sum over forward differences
    const double w_in = sigma2_ / (2.0 * dx_ * dx_);
    if (w_in != 0.0) {
      double s = 0.0;
      for (int i = -1; i < n; ++i) {
        const double d =
            ((i + 1 >= 0 && i + 1 < n) ? phi[i + 1] : 0.0) -
            ((i >= 0 && i < n) ? phi[i] : 0.0);
        s += d * d;
      }
      total += w_in * s;
    }
  }
  for (int j = 1; j <= J; ++j) {
    const double w = w_[static_cast<std::size_t>(j - 1)];
    if (w == 0.0) continue;
    double corr = 0.0;
    for (int i = 0; i + j < n; ++i) corr += phi[i] * phi[i + j];
    total += w * (2.0 * sq - 2.0 * corr);
  }
  for (double w : far_w_) total += 2.0 * w * sq;
  return total * dx_;
}

GridFunction apply_outer(const LevyMeasure& mu, double r,
                         const GridFunction& phi) {
  JumpKernel k(mu, phi.grid(), r);
  GridFunction out(phi.grid_ptr(), phi.time(), grid::Closure::constant(0.0));
  out.set_values(k.apply_outer(phi));
  return out;
}

GridFunction apply_inner(const LevyMeasure& mu, double r,
                         const GridFunction& phi) {
  JumpKernel k(mu, phi.grid(), r);
  GridFunction out(phi.grid_ptr(), phi.time(), grid::Closure::constant(0.0));
  out.set_values(k.apply_inner(phi));
  return out;
}

GridFunction bilinear_form(const LevyMeasure& mu, double r,
                           const GridFunction& phi, const GridFunction& psi) {
  JumpKernel k(mu, phi.grid(), r);
  GridFunction out(phi.grid_ptr(), phi.time(), grid::Closure::constant(0.0));
  out.set_values(k.bilinear(phi, psi));
  return out;
}

double integral_interior(const Grid& g, const Eigen::ArrayXd& cellwise) {
  double s = 0.0;
  for (int i = g.interior_begin(); i < g.interior_end(); ++i) s += cellwise[i];
  return s * g.dx();
}

double integral_box(const Grid& g, const Eigen::ArrayXd& cellwise) {
  return cellwise.sum() * g.dx();
}

double l1_interior(const Grid& g, const Eigen::ArrayXd& cellwise) {
  double s = 0.0;
  for (int i = g.interior_begin(); i < g.interior_end(); ++i)
    s += std::abs(cellwise[i]);
  return s * g.dx();
}

namespace {

// zero off the box in both variables
inline double mat_at(const Eigen::MatrixXd& m, long i, long j) {
  if (i < 0 || j < 0 || i >= m.rows() || j >= m.cols()) return 0.0;
  return m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

}  // namespace

TensorForms cross_forms(const LevyMeasure& mu, double r, const Grid& g,
                        const Eigen::MatrixXd& phi,
                        const Eigen::MatrixXd& psi) {
  if (phi.rows() != psi.rows() || phi.cols() != psi.cols())
    throw OpsError("tensor arguments must share the grid");
  JumpKernel k(mu, g, r);
  if (!k.far_z().empty())
    throw OpsError("tensor forms need all jumps on the lattice");
  const int n = g.n_cells();
  TensorForms out;
  out.b_x_xy = Eigen::MatrixXd::Zero(n, n);
  out.b_y_xy = Eigen::MatrixXd::Zero(n, n);
  out.b_xy = Eigen::MatrixXd::Zero(n, n);
  const int J = k.n_offsets();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double sxx = 0.0, syy = 0.0, sxy = 0.0;
      const double p0 = phi(i, j), q0 = psi(i, j);
      for (int m = 1; m <= J; ++m) {
        const double w = k.weight(m);
        if (w == 0.0) continue;
        for (int sgn = -1; sgn <= 1; sgn += 2) {
          const long di = i + sgn * m, dj = j + sgn * m;
          const double dq_diag = mat_at(psi, di, dj) - q0;
          sxx += 0.5 * w * (mat_at(phi, di, j) - p0) * dq_diag;
          syy += 0.5 * w * (mat_at(phi, i, dj) - p0) * dq_diag;
          sxy += 0.5 * w * (mat_at(phi, di, j) - p0) * (mat_at(psi, i, dj) - q0);
        }
      }
      out.b_x_xy(i, j) = sxx;
      out.b_y_xy(i, j) = syy;
      out.b_xy(i, j) = sxy;
    }
  return out;
}

Eigen::MatrixXd tensor_diag_form(const LevyMeasure& mu, double r,
                                 const Grid& g, const Eigen::MatrixXd& phi,
                                 const Eigen::MatrixXd& psi) {
  JumpKernel k(mu, g, r);
  if (!k.far_z().empty())
    throw OpsError("tensor forms need all jumps on the lattice");
  const int n = g.n_cells();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  const int J = k.n_offsets();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      const double p0 = phi(i, j), q0 = psi(i, j);
      for (int m = 1; m <= J; ++m) {
        const double w = k.weight(m);
        if (w == 0.0) continue;
        for (int sgn = -1; sgn <= 1; sgn += 2)
          s += 0.5 * w * (mat_at(phi, i + sgn * m, j + sgn * m) - p0) *
               (mat_at(psi, i + sgn * m, j + sgn * m) - q0);
      }
      out(i, j) = s;
    }
  return out;
}

Eigen::MatrixXd tensor_b_x(const LevyMeasure& mu, double r, const Grid& g,
                           const Eigen::MatrixXd& phi,
                           const Eigen::MatrixXd& psi) {
  JumpKernel k(mu, g, r);
  const int n = g.n_cells();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  const int J = k.n_offsets();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int m = 1; m <= J; ++m) {
        const double w = k.weight(m);
        if (w == 0.0) continue;
        for (int sgn = -1; sgn <= 1; sgn += 2)
          s += 0.5 * w * (mat_at(phi, i + sgn * m, j) - phi(i, j)) *
               (mat_at(psi, i + sgn * m, j) - psi(i, j));
      }
      out(i, j) = s;
    }
  return out;
}

Eigen::MatrixXd tensor_b_y(const LevyMeasure& mu, double r, const Grid& g,
                           const Eigen::MatrixXd& phi,
                           const Eigen::MatrixXd& psi) {
  JumpKernel k(mu, g, r);
  const int n = g.n_cells();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  const int J = k.n_offsets();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int m = 1; m <= J; ++m) {
        const double w = k.weight(m);
        if (w == 0.0) continue;
        for (int sgn = -1; sgn <= 1; sgn += 2)
          s += 0.5 * w * (mat_at(phi, i, j + sgn * m) - phi(i, j)) *
               (mat_at(psi, i, j + sgn * m) - psi(i, j));
      }
      out(i, j) = s;
    }
  return out;
}

}  // namespace les::ops

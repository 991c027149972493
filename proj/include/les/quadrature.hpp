#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace les::quad {

// Composite midpoint on one cell, refined by node tripling (midpoints stay
// nested under tripling) with Richardson extrapolation on the h^2 error
// series. Deterministic for a given integrand: the refinement path depends
// only on the sampled values.
template <class F>
double cell_integral(F&& f, double lo, double hi, double rel_tol = 1e-13,
                     int max_level = 10) {
  const double h = hi - lo;
  if (!(h > 0)) return 0.0;

  double table[16][16];
  long n = 1;
  double sum = f(lo + 0.5 * h);
  table[0][0] = sum * h;

  for (int lv = 1; lv <= max_level && lv < 16; ++lv) {
    // old midpoints are every third node of the tripled rule
    n *= 3;
    const double hn = h / static_cast<double>(n);
    double add = 0.0;
    for (long i = 0; i < n; ++i) {
      if (i % 3 == 1) continue;  // kept from the previous level
      add += f(lo + (static_cast<double>(i) + 0.5) * hn);
    }
    sum += add;
    table[lv][0] = sum * hn;
    double p = 9.0;
    for (int j = 1; j <= lv; ++j) {
      table[lv][j] = (p * table[lv][j - 1] - table[lv - 1][j - 1]) / (p - 1.0);
      p *= 9.0;
    }
    const double cur = table[lv][lv];
    const double prev = table[lv - 1][lv - 1];
    if (std::abs(cur - prev) <= rel_tol * std::abs(cur)) return cur;
  }
  return table[std::min(max_level, 15)][std::min(max_level, 15)];
}

// Integral over a list of contiguous cells given by their edges.
template <class F>
double integral_over_cells(F&& f, const std::vector<double>& edges,
                           double rel_tol = 1e-13, int max_level = 10) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    total += cell_integral(f, edges[i], edges[i + 1], rel_tol, max_level);
  return total;
}

}  // namespace les::quad

#pragma once

// Internal dense LU solve with partial pivoting. Systems here are tiny
// (n-1 unknowns), so no structure is exploited.

#include <cmath>
#include <complex>
#include <vector>

#include "standby/errors.hpp"

namespace standby::detail {

template <typename T>
std::vector<T> lu_solve(std::vector<std::vector<T>> a, std::vector<T> b) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = std::abs(a[col][col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double v = std::abs(a[r][col]);
      if (v > best) { best = v; piv = r; }
    }
    if (best < 1e-14) throw SingularSystem("pivot below 1e-14");
    if (piv != col) { std::swap(a[piv], a[col]); std::swap(b[piv], b[col]); }
    for (std::size_t r = col + 1; r < n; ++r) {
      const T factor = a[r][col] / a[col][col];
      if (factor == T{}) continue;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
      b[r] -= factor * b[col];
    }
  }
  std::vector<T> x(n);
  for (std::size_t i = n; i-- > 0;) {
    T acc = b[i];
    for (std::size_t c = i + 1; c < n; ++c) acc -= a[i][c] * x[c];
    x[i] = acc / a[i][i];
  }
  return x;
}

template <typename T>
double residual_inf(const std::vector<std::vector<T>>& a,
                    const std::vector<T>& x, const std::vector<T>& b) {
  double worst = 0.0;
  for (std::size_t r = 0; r < a.size(); ++r) {
    T acc = -b[r];
    for (std::size_t c = 0; c < a.size(); ++c) acc += a[r][c] * x[c];
    worst = std::max(worst, std::abs(acc));
  }
  return worst;
}

}  // namespace standby::detail

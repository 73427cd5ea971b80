#pragma once

// Internal adaptive Gauss-Legendre quadrature used by the transform
// evaluations. Panels are refined by bisection until the whole-panel
// estimate agrees with the sum over halves within the local tolerance.

#include <cmath>
#include <complex>
#include <functional>

#include "standby/errors.hpp"

namespace standby::detail {

using Integrand = std::function<std::complex<double>(double)>;

inline std::complex<double> gauss15(const Integrand& f, double a, double b) {
  // 15-point Gauss-Legendre nodes/weights on [-1, 1].
  static const double xs[8] = {
      0.0000000000000000, 0.2011940939974345, 0.3941513470775634,
      0.5709721726085388, 0.7244177313601701, 0.8482065834104272,
      0.9372733924007060, 0.9879925180204854};
  static const double ws[8] = {
      0.2025782419255613, 0.1984314853271116, 0.1861610000155622,
      0.1662692058169939, 0.1395706779261543, 0.1071592204671719,
      0.0703660474881081, 0.0307532419961173};
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  std::complex<double> acc = ws[0] * f(c);
  for (int i = 1; i < 8; ++i) {
    acc += ws[i] * (f(c + h * xs[i]) + f(c - h * xs[i]));
  }
  return h * acc;
}

inline std::complex<double> adaptive_panel(const Integrand& f, double a,
                                           double b, double tol, int depth,
                                           std::complex<double> whole) {
  const double m = 0.5 * (a + b);
  const std::complex<double> left = gauss15(f, a, m);
  const std::complex<double> right = gauss15(f, m, b);
  const std::complex<double> refined = left + right;
  if (std::abs(refined - whole) < tol || (b - a) < 1e-300) {
    return refined;
  }
  if (depth <= 0) {
    throw QuadratureFailure("adaptive quadrature did not reach tolerance");
  }
  return adaptive_panel(f, a, m, 0.5 * tol, depth - 1, left) +
         adaptive_panel(f, m, b, 0.5 * tol, depth - 1, right);
}

/// Integrate f over [a, b] to absolute tolerance abs_tol.
inline std::complex<double> integrate(const Integrand& f, double a, double b,
                                      double abs_tol) {
  if (!(b > a)) return {0.0, 0.0};
  return adaptive_panel(f, a, b, abs_tol, 48, gauss15(f, a, b));
}

}  // namespace standby::detail

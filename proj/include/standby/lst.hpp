#pragma once

#include <complex>
#include <vector>

#include "standby/model.hpp"

namespace standby {

/// Solution of the lifetime-transform linear system at one argument s:
/// phis[j] = E e^{-s tau_j}, j = 0..n-1.
struct LstSolution {
  std::complex<double> s;
  std::vector<std::complex<double>> phis;
  int truncation_J = 0;   // Poisson-weight truncation index (reporting)
  double residual = 0.0;  // inf-norm residual of the linear solve
};

/// Assembles the (n-1)x(n-1) system from g and g_k and solves it by dense
/// LU with partial pivoting, working in the deficits 1 - phi_j so that the
/// normalization phi_j(0) = 1 is exact even when the system is nearly
/// singular (very slow absorption). phi_0 = g(s) phi_1. The tail
/// coefficient g - sum_{k<j} g_k is formed as a complement of partial sums,
/// which is exact for the j used here.
LstSolution solve_phis(const SystemConfig& config, std::complex<double> s);

/// Closed form for n = 2: phi_1 = g_0 / (1 - g + g_0).
std::complex<double> phi1_two_element(const SystemConfig& config,
                                      std::complex<double> s);

/// Exact mean lifetimes (E tau_0 .. E tau_{n-1}) from the expectation form
/// of the lifetime recursions: a real linear system with coefficients
/// p_k = g_k(0) and tail probabilities q_j = 1 - sum_{k<j} p_k.
std::vector<double> mean_lifetimes(const SystemConfig& config);

}  // namespace standby

#include "standby/lst.hpp"

#include <cmath>

#include "linalg.hpp"
#include "standby/errors.hpp"

namespace standby {

LstSolution solve_phis(const SystemConfig& config, std::complex<double> s) {
  const int n = config.n;
  const auto& wt = config.working_time;
  const double mu = config.mu;

  const std::complex<double> g = wt.lst(s);
  std::vector<std::complex<double>> gk(static_cast<std::size_t>(n - 1));
  for (int k = 0; k <= n - 2; ++k) {
    gk[static_cast<std::size_t>(k)] = wt.weighted_lst(k, s, mu);
  }

  // Solve for the deficits psi_j = 1 - phi_j instead of phi_j directly.
  // Substituting phi = 1 - psi into the lifetime recursions leaves the same
  // matrix but turns every right-hand side into 1 - g(s), which vanishes at
  // s = 0. That matters: when absorption is very slow (mean period counts of
  // 1e13 and beyond) the matrix has a near-zero eigenvalue equal to the
  // absorption rate, and solving for phi loses digits against the exact
  // normalization phi_j(0) = 1. In the psi form the absolute error scales
  // with |psi| itself, so the normalization is exact and small-s values stay
  // fully accurate. unknowns x[i] = psi_{i+1}, i = 0..n-2.
  const int t = n - 1;
  std::vector<std::vector<std::complex<double>>> a(
      t, std::vector<std::complex<double>>(t, 0.0));
  std::vector<std::complex<double>> rhs(t, 1.0 - g);
  std::complex<double> partial = 0.0;
  for (int j = 1; j <= n - 1; ++j) {
    const int r = j - 1;
    partial += gk[static_cast<std::size_t>(j - 1)];  // now sum_{k<=j-1} g_k
    const std::complex<double> tail = g - partial;
    a[r][r] += 1.0;
    a[r][0] -= tail;
    if (j <= n - 2) {
      for (int k = 0; k <= j - 1; ++k) {
        a[r][j - k] -= gk[static_cast<std::size_t>(k)];  // psi_{j+1-k}
      }
    } else {
      for (int k = 1; k <= n - 2; ++k) {
        a[r][n - k - 1] -= gk[static_cast<std::size_t>(k)];  // psi_{n-k}
      }
    }
  }

  const auto x = detail::lu_solve(a, rhs);

  LstSolution sol;
  sol.s = s;
  sol.residual = detail::residual_inf(a, x, rhs);
  sol.truncation_J = wt.truncation_index(mu);
  sol.phis.resize(static_cast<std::size_t>(n));
  for (int j = 1; j <= n - 1; ++j) {
    sol.phis[static_cast<std::size_t>(j)] =
        1.0 - x[static_cast<std::size_t>(j - 1)];
  }
  sol.phis[0] = g * sol.phis[1];
  return sol;
}

std::complex<double> phi1_two_element(const SystemConfig& config,
                                      std::complex<double> s) {
  if (config.n != 2) throw DomainError("phi1_two_element: n must be 2");
  const auto& wt = config.working_time;
  const std::complex<double> g = wt.lst(s);
  const std::complex<double> g0 = wt.weighted_lst(0, s, config.mu);
  return g0 / (1.0 - g + g0);
}

std::vector<double> mean_lifetimes(const SystemConfig& config) {
  const int n = config.n;
  const auto& wt = config.working_time;
  const double b = wt.mean();

  std::vector<double> p(static_cast<std::size_t>(n - 1));
  for (int k = 0; k <= n - 2; ++k) {
    p[static_cast<std::size_t>(k)] = wt.weighted_lst(k, 0.0, config.mu).real();
  }

  // unknowns m[i] = E tau_{i+1}
  const int t = n - 1;
  std::vector<std::vector<double>> a(t, std::vector<double>(t, 0.0));
  std::vector<double> rhs(t, b);
  double partial = 0.0;
  for (int j = 1; j <= n - 1; ++j) {
    const int r = j - 1;
    partial += p[static_cast<std::size_t>(j - 1)];
    const double q = 1.0 - partial;  // P(nu >= j), or >= n-1 for the last row
    a[r][r] += 1.0;
    a[r][0] -= q;
    if (j <= n - 2) {
      for (int k = 0; k <= j - 1; ++k) {
        a[r][j - k] -= p[static_cast<std::size_t>(k)];
      }
    } else {
      for (int k = 1; k <= n - 2; ++k) {
        a[r][n - k - 1] -= p[static_cast<std::size_t>(k)];
      }
    }
  }

  const auto m = detail::lu_solve(a, rhs);
  std::vector<double> out(static_cast<std::size_t>(n));
  out[0] = b + m[0];  // tau_0 = eta + tau_1
  for (int j = 1; j <= n - 1; ++j) {
    out[static_cast<std::size_t>(j)] = m[static_cast<std::size_t>(j - 1)];
  }
  return out;
}

}  // namespace standby

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "standby/lst.hpp"
#include "standby/sim.hpp"

namespace standby {

/// CDF of the fast-repair limit law: 1 - e^{-t/b}.
double exponential_limit_cdf(double t, double b);

/// Transform of the limit law: 1 / (1 + b s).
std::complex<double> limit_lst(std::complex<double> s, double b);

struct SweepRow {
  double mu = 0.0;
  double epsilon = 0.0;
  double ks_scaled = 0.0;         // KS of eps^{n-1} tau samples vs the limit
  double scaled_mean_ratio = 0.0; // E tau_j * eps^{n-1} / b
  double lst_gap = 0.0;           // max_s |phi_j(eps^{n-1} s) - 1/(1+bs)|
};

struct AsymptoticReport {
  std::vector<SweepRow> rows;
  DistributionSpec dist;
  int n = 2;
  int j = 1;
  std::int64_t sample_count = 0;
  std::uint64_t seed = 0;
  std::vector<double> s_grid;
  /// Per row: the scaled empirical CDF decimated to at most 512 sorted
  /// points, kept so reports can plot the overlay without re-simulating.
  std::vector<std::vector<double>> scaled_ecdf_points;
};

/// Per-mu verification of both fast-repair convergences: the scaled
/// lifetime law against the exponential limit (simulation + KS) and the
/// transform against 1/(1+bs). Row i runs on child seed (seed, i).
AsymptoticReport convergence_sweep(const DistributionSpec& dist, int n, int j,
                                   const std::vector<double>& mu_list,
                                   std::int64_t sample_count,
                                   std::uint64_t seed,
                                   const std::vector<double>& s_grid);

/// First-order expansion diagnostics at argument eps^{n-1} s. Each ratio
/// tends to 1 as mu grows.
struct ExpansionCheck {
  double r_g = 0.0;                 // (1 - g) / (eps^{n-1} b s)
  double r_g0 = 0.0;                // (eps - g_0) / (eps^{n-1} s gamma_0)
  std::vector<double> r_gj;         // (g_j(0) - g_j) / (eps^{n-1} s gamma_j), j>=1
  double g1_zero = 0.0;             // g_1(0)
  double gamma0 = 0.0;              // gamma_0(mu)
};

ExpansionCheck expansion_check(const WorkingTimeModel& model, int n, double mu,
                               double s, int max_j = 2);

/// Deviations d_j = |(phi_{j+1}/phi_1 - 1)/(eps^{n-j-1} s b) - 1| of the
/// transform-ratio recursions, j = 1..n-2, evaluated at eps^{n-1} s.
std::vector<double> ratio_recursion_check(const SystemConfig& config,
                                          double s);

/// max over k = 0..n-1, k != 1 of |phi_k(eps^{n-1} s) / phi_1 - 1|.
double max_ratio_gap(const SystemConfig& config, double s);

}  // namespace standby

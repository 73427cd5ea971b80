#include "standby/asym.hpp"

#include <cmath>

#include "standby/errors.hpp"

namespace standby {

double exponential_limit_cdf(double t, double b) {
  if (t < 0) throw DomainError("exponential_limit_cdf: t must be >= 0");
  return -std::expm1(-t / b);
}

std::complex<double> limit_lst(std::complex<double> s, double b) {
  return 1.0 / (1.0 + b * s);
}

AsymptoticReport convergence_sweep(const DistributionSpec& dist, int n, int j,
                                   const std::vector<double>& mu_list,
                                   std::int64_t sample_count,
                                   std::uint64_t seed,
                                   const std::vector<double>& s_grid) {
  if (mu_list.size() < 2) throw DomainError("convergence_sweep: need >= 2 mu values");
  for (std::size_t i = 1; i < mu_list.size(); ++i) {
    if (mu_list[i] <= mu_list[i - 1]) {
      throw DomainError("convergence_sweep: mu_list must be ascending");
    }
  }
  AsymptoticReport report;
  report.dist = dist;
  report.n = n;
  report.j = j;
  report.sample_count = sample_count;
  report.seed = seed;
  report.s_grid = s_grid;
  for (std::size_t row_idx = 0; row_idx < mu_list.size(); ++row_idx) {
    const double mu = mu_list[row_idx];
    SystemConfig config(n, mu, WorkingTimeModel(dist));
    const double b = config.working_time.mean();
    const double eps = config.working_time.epsilon(mu);
    const double scale = std::pow(eps, n - 1);

    SweepRow row;
    row.mu = mu;
    row.epsilon = eps;

    const std::uint64_t row_seed = RandomSource::child_seed(seed, row_idx);
    EmpiricalDistribution emp = run_batch(config, j, sample_count, row_seed,
                                          Engine::EmbeddedChain);
    std::vector<double> scaled(emp.samples);
    for (double& x : scaled) x *= scale;
    EmpiricalDistribution scaled_emp = EmpiricalDistribution::from_samples(
        std::move(scaled), row_seed, Engine::EmbeddedChain);
    row.ks_scaled = ks_distance(
        scaled_emp, [b](double t) { return exponential_limit_cdf(t, b); });

    row.scaled_mean_ratio =
        mean_lifetimes(config)[static_cast<std::size_t>(j)] * scale / b;

    double gap = 0.0;
    for (double s : s_grid) {
      const auto sol = solve_phis(config, scale * s);
      gap = std::max(gap, std::abs(sol.phis[static_cast<std::size_t>(j)] -
                                   limit_lst(s, b)));
    }
    row.lst_gap = gap;
    report.rows.push_back(row);

    std::vector<double> decimated;
    const std::size_t limit = 512;
    const std::size_t total = scaled_emp.samples.size();
    const std::size_t stride =
        std::max<std::size_t>(1, (total + limit - 1) / limit);
    for (std::size_t i = 0; i < total; i += stride) {
      decimated.push_back(scaled_emp.samples[i]);
    }
    report.scaled_ecdf_points.push_back(std::move(decimated));
  }
  return report;
}

ExpansionCheck expansion_check(const WorkingTimeModel& model, int n, double mu,
                               double s, int max_j) {
  const double b = model.mean();
  const double eps = model.epsilon(mu);
  const double scale = std::pow(eps, n - 1);
  const double u = scale * s;
  if (!(u < 0.1)) {
    throw DomainError("expansion_check: requires eps^{n-1} s < 0.1");
  }
  ExpansionCheck check;
  check.r_g = (1.0 - model.lst(u).real()) / (u * b);
  const double gamma0 = model.gamma_weight(0, mu);
  check.gamma0 = gamma0;
  check.r_g0 = (eps - model.weighted_lst(0, u, mu).real()) / (u * gamma0);
  check.g1_zero = model.weighted_lst(1, 0.0, mu).real();
  for (int j = 1; j <= max_j; ++j) {
    const double gj0 = model.weighted_lst(j, 0.0, mu).real();
    const double gj = model.weighted_lst(j, u, mu).real();
    const double gammaj = model.gamma_weight(j, mu);
    check.r_gj.push_back((gj0 - gj) / (u * gammaj));
  }
  return check;
}

std::vector<double> ratio_recursion_check(const SystemConfig& config,
                                          double s) {
  if (config.n < 3) throw DomainError("ratio_recursion_check: n must be >= 3");
  const int n = config.n;
  const double b = config.working_time.mean();
  const double eps = config.working_time.epsilon(config.mu);
  const auto sol = solve_phis(config, std::pow(eps, n - 1) * s);
  const std::complex<double> phi1 = sol.phis[1];
  std::vector<double> deviations;
  for (int j = 1; j <= n - 2; ++j) {
    const std::complex<double> ratio =
        sol.phis[static_cast<std::size_t>(j + 1)] / phi1;
    const double predicted = std::pow(eps, n - j - 1) * s * b;
    deviations.push_back(std::abs((ratio - 1.0) / predicted - 1.0));
  }
  return deviations;
}

double max_ratio_gap(const SystemConfig& config, double s) {
  const int n = config.n;
  const double eps = config.working_time.epsilon(config.mu);
  const auto sol = solve_phis(config, std::pow(eps, n - 1) * s);
  const std::complex<double> phi1 = sol.phis[1];
  double worst = 0.0;
  for (int k = 0; k <= n - 1; ++k) {
    if (k == 1) continue;
    worst = std::max(
        worst, std::abs(sol.phis[static_cast<std::size_t>(k)] / phi1 - 1.0));
  }
  return worst;
}

}  // namespace standby

#include "standby/model.hpp"

#include <cmath>

#include "linalg.hpp"
#include "standby/errors.hpp"

namespace standby {

SystemConfig::SystemConfig(int n_, double mu_, WorkingTimeModel wt)
    : n(n_), mu(mu_), working_time(std::move(wt)) {
  if (n < 2) throw ValidationError("n must be >= 2");
  if (!(mu > 0)) throw ValidationError("mu must be > 0");
}

double repair_count_pmf(double mu, double eta, int k) {
  if (k < 0) throw DomainError("repair_count_pmf: k must be >= 0");
  const double lam = mu * eta;
  if (lam == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(-lam + k * std::log(lam) - std::lgamma(k + 1.0));
}

namespace {

std::int64_t poisson_inversion(RandomSource& rng, double lam) {
  const double u = rng.uniform();
  double pmf = std::exp(-lam);
  double cum = pmf;
  std::int64_t k = 0;
  while (u > cum) {
    ++k;
    pmf *= lam / static_cast<double>(k);
    cum += pmf;
    if (k > 2000) break;  // cum ~ 1 long before this for lam <= 30
  }
  return k;
}

// Hormann's PTRS transformed rejection, valid for lam >= 10.
std::int64_t poisson_ptrs(RandomSource& rng, double lam) {
  const double slam = std::sqrt(lam);
  const double loglam = std::log(lam);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::abs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + lam + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        kf * loglam - lam - std::lgamma(kf + 1.0)) {
      return static_cast<std::int64_t>(kf);
    }
  }
}

}  // namespace

std::int64_t sample_repair_count(RandomSource& rng, double mu, double eta) {
  const double lam = mu * eta;
  if (lam == 0.0) return 0;
  return lam <= 30.0 ? poisson_inversion(rng, lam) : poisson_ptrs(rng, lam);
}

ChainState next_state(int j, std::int64_t nu, int n) {
  if (j < 0 || j > n - 1) throw DomainError("next_state: j must be in [0, n-1]");
  if (nu < 0) throw DomainError("next_state: nu must be >= 0");
  if (j == 0) return {1, false};
  if (j <= n - 2) {
    if (nu >= j) return {1, false};
    return {static_cast<int>(j + 1 - nu), false};
  }
  // j == n - 1
  if (nu == 0) return {n, true};
  if (nu <= n - 2) return {static_cast<int>(n - nu), false};
  return {1, false};
}

std::vector<double> AbsorbingChain::expected_steps() const {
  const int t = n - 1;  // transient count
  std::vector<std::vector<double>> a(t, std::vector<double>(t, 0.0));
  std::vector<double> rhs(t, 1.0);
  for (int r = 0; r < t; ++r) {
    for (int c = 0; c < t; ++c) {
      a[r][c] = (r == c ? 1.0 : 0.0) - transition[r][c];
    }
  }
  return detail::lu_solve(a, rhs);
}

std::vector<double> AbsorbingChain::step_count_pmf(int from,
                                                   int max_steps) const {
  const int t = n - 1;
  if (from < 1 || from > t) throw DomainError("step_count_pmf: bad state");
  std::vector<double> dist(t, 0.0);
  dist[from - 1] = 1.0;
  std::vector<double> pmf;
  pmf.reserve(max_steps);
  for (int m = 0; m < max_steps; ++m) {
    std::vector<double> next(t, 0.0);
    double absorbed = 0.0;
    for (int r = 0; r < t; ++r) {
      if (dist[r] == 0.0) continue;
      for (int c = 0; c < t; ++c) next[c] += dist[r] * transition[r][c];
      absorbed += dist[r] * transition[r][t];
    }
    pmf.push_back(absorbed);
    dist.swap(next);
  }
  return pmf;
}

AbsorbingChain deterministic_eta_chain(const SystemConfig& config, double d) {
  if (config.working_time.spec().family != Family::Deterministic) {
    throw DomainError("deterministic_eta_chain: working time is not deterministic");
  }
  const int n = config.n;
  AbsorbingChain chain;
  chain.n = n;
  chain.transition.assign(n, std::vector<double>(n, 0.0));
  for (int j = 1; j <= n - 1; ++j) {
    auto& row = chain.transition[j - 1];
    // enumerate nu = 0..n-2 explicitly, then assign the exact remaining
    // mass P(nu >= cutoff) to the "back to state 1" branch
    const int cutoff = (j <= n - 2) ? j : n - 1;
    double below = 0.0;
    for (int k = 0; k < cutoff; ++k) {
      const double p = repair_count_pmf(config.mu, d, k);
      below += p;
      const ChainState s = next_state(j, k, n);
      row[s.absorbed ? n - 1 : s.broken - 1] += p;
    }
    row[0] += 1.0 - below;  // nu >= cutoff always returns to state 1
  }
  chain.transition[n - 1][n - 1] = 1.0;  // absorbed row
  return chain;
}

}  // namespace standby

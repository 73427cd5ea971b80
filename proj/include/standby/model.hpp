#pragma once

#include <cstdint>
#include <vector>

#include "standby/dist.hpp"
#include "standby/rng.hpp"

namespace standby {

/// The system: n identical elements (one working, the rest cold standby),
/// a single repair device with exponential repair rate mu, and working-time
/// law G.
struct SystemConfig {
  int n;
  double mu;
  WorkingTimeModel working_time;

  SystemConfig(int n_, double mu_, WorkingTimeModel wt);
};

/// Broken-element count observed at the start of a working period.
/// Absorption (all n broken) is a separate flag so simulation code cannot
/// transition out of it by accident.
struct ChainState {
  int broken = 0;
  bool absorbed = false;
};

/// Poisson(mu * eta) mass at k: the probability that exactly k repairs
/// complete during a working period of length eta.
double repair_count_pmf(double mu, double eta, int k);

/// Poisson(mu * eta) draw. Inversion by search for mean <= 30, transformed
/// rejection (PTRS) above; the method choice depends only on mu * eta.
std::int64_t sample_repair_count(RandomSource& rng, double mu, double eta);

/// Broken count at the start of the next working period, given the count j
/// at the start of the current one and nu completed repairs during it.
ChainState next_state(int j, std::int64_t nu, int n);

/// Absorbing chain over broken-counts for deterministic working time d.
/// Transient states 1..n-1 map to row/column indices 0..n-2; the last
/// index is the absorbing state.
struct AbsorbingChain {
  int n = 2;
  std::vector<std::vector<double>> transition;  // (n) x (n), rows sum to 1

  /// Expected number of working periods until absorption, from each
  /// transient state ((I - Q)^{-1} 1).
  std::vector<double> expected_steps() const;

  /// P(absorbed after exactly m periods), m = 1..max_steps, starting from
  /// transient state `from` (1-based broken count).
  std::vector<double> step_count_pmf(int from, int max_steps) const;
};

/// Exact embedded-chain transition matrix when G is a point mass at d.
/// The lifetime is then (number of periods) * d exactly, which makes this
/// chain an independent oracle for the simulators.
AbsorbingChain deterministic_eta_chain(const SystemConfig& config, double d);

}  // namespace standby

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "standby/model.hpp"

namespace standby {

enum class Engine { EmbeddedChain, EventDriven };

std::string engine_name(Engine e);

/// Sorted lifetime samples with summary statistics. Immutable once built.
struct EmpiricalDistribution {
  std::vector<double> samples;  // ascending
  std::int64_t count = 0;
  double mean = 0.0;
  double stderror = 0.0;  // 0 for a single-sample batch (flagged below)
  bool single_sample = false;
  std::uint64_t seed = 0;
  Engine engine = Engine::EmbeddedChain;

  static EmpiricalDistribution from_samples(std::vector<double> samples,
                                            std::uint64_t seed, Engine engine);

  double quantile(double p) const;
  double ecdf(double x) const;
};

struct LifetimeSample {
  double lifetime = 0.0;
  std::int64_t periods = 0;
};

/// Defensive bound on working periods per lifetime; absorption is almost
/// sure, so hitting this indicates a pathological configuration.
inline constexpr std::int64_t kPeriodCap = 1'000'000'000;

/// Embedded-chain engine: one step per working period. Draws eta ~ G and
/// nu ~ Poisson(mu * eta), accumulates eta, transitions on the broken
/// count. Exact in distribution because repairs are memoryless.
LifetimeSample simulate_embedded(const SystemConfig& config, int j0,
                                 RandomSource& rng);
double simulate_lifetime_embedded(const SystemConfig& config, int j0,
                                  RandomSource& rng);

/// Event-driven engine: explicit failure and repair clocks processed in
/// time order. Independent realization of the same lifetime law; kept as
/// an oracle for the embedded engine.
double simulate_lifetime_event_driven(const SystemConfig& config, int j0,
                                      RandomSource& rng);

/// Lifetimes in replication order (replication i on child seed (seed, i)).
std::vector<double> raw_lifetimes(const SystemConfig& config, int j0,
                                  std::int64_t count, std::uint64_t seed,
                                  Engine engine);

/// Batch of independent lifetimes. Replication i runs on the child seed
/// derived from (seed, i), so the result does not depend on how work is
/// scheduled across threads. OpenMP-parallel when available.
EmpiricalDistribution run_batch(const SystemConfig& config, int j0,
                                std::int64_t count, std::uint64_t seed,
                                Engine engine);

/// Serial reference for run_batch; must produce identical output.
EmpiricalDistribution run_batch_serial(const SystemConfig& config, int j0,
                                       std::int64_t count, std::uint64_t seed,
                                       Engine engine);

/// sup_x |ECDF(x) - cdf(x)| evaluated at both sides of each order statistic.
double ks_distance(const EmpiricalDistribution& emp,
                   const std::function<double(double)>& cdf);

/// sup |ECDF_a - ECDF_b| by merge scan.
double two_sample_ks(const EmpiricalDistribution& a,
                     const EmpiricalDistribution& b);

}  // namespace standby

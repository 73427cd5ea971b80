#include "standby/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "standby/errors.hpp"

namespace standby {

std::string engine_name(Engine e) {
  return e == Engine::EmbeddedChain ? "embedded" : "event";
}

EmpiricalDistribution EmpiricalDistribution::from_samples(
    std::vector<double> samples, std::uint64_t seed, Engine engine) {
  if (samples.empty()) throw DomainError("empirical distribution needs >= 1 sample");
  EmpiricalDistribution emp;
  emp.samples = std::move(samples);
  std::sort(emp.samples.begin(), emp.samples.end());
  emp.count = static_cast<std::int64_t>(emp.samples.size());
  double sum = 0.0;
  for (double x : emp.samples) sum += x;
  emp.mean = sum / static_cast<double>(emp.count);
  if (emp.count == 1) {
    emp.single_sample = true;
    emp.stderror = 0.0;
  } else {
    double ss = 0.0;
    for (double x : emp.samples) {
      const double d = x - emp.mean;
      ss += d * d;
    }
    emp.stderror = std::sqrt(ss / (static_cast<double>(emp.count - 1) *
                                   static_cast<double>(emp.count)));
  }
  emp.seed = seed;
  emp.engine = engine;
  return emp;
}

double EmpiricalDistribution::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile: p must be in [0,1]");
  const auto idx = static_cast<std::size_t>(
      std::min<double>(static_cast<double>(count - 1),
                       std::floor(p * static_cast<double>(count))));
  return samples[idx];
}

double EmpiricalDistribution::ecdf(double x) const {
  const auto it = std::upper_bound(samples.begin(), samples.end(), x);
  return static_cast<double>(it - samples.begin()) /
         static_cast<double>(count);
}

LifetimeSample simulate_embedded(const SystemConfig& config, int j0,
                                 RandomSource& rng) {
  if (j0 < 0 || j0 > config.n - 1) {
    throw DomainError("simulate_embedded: j0 must be in [0, n-1]");
  }
  double t = 0.0;
  std::int64_t periods = 0;
  ChainState state{j0, false};
  while (!state.absorbed) {
    if (++periods > kPeriodCap) {
      throw SimulationOverrun("embedded engine exceeded the period cap");
    }
    const double eta = config.working_time.sample(rng);
    t += eta;
    // nu is drawn even from state 0 (where it cannot matter) so the
    // random-stream layout is identical across j0
    const std::int64_t nu = sample_repair_count(rng, config.mu, eta);
    state = next_state(state.broken, nu, config.n);
  }
  return {t, periods};
}

double simulate_lifetime_embedded(const SystemConfig& config, int j0,
                                  RandomSource& rng) {
  return simulate_embedded(config, j0, rng).lifetime;
}

double simulate_lifetime_event_driven(const SystemConfig& config, int j0,
                                      RandomSource& rng) {
  if (j0 < 0 || j0 > config.n - 1) {
    throw DomainError("simulate_lifetime_event_driven: j0 must be in [0, n-1]");
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  double now = 0.0;
  int broken = j0;
  double fail_at = config.working_time.sample(rng);
  double repair_at = broken > 0 ? rng.exponential(config.mu) : kInf;
  std::int64_t failures = 0;
  for (;;) {
    if (fail_at <= repair_at) {
      now = fail_at;
      if (++broken == config.n) return now;
      if (++failures > kPeriodCap) {
        throw SimulationOverrun("event engine exceeded the event cap");
      }
      fail_at = now + config.working_time.sample(rng);
      if (repair_at == kInf) repair_at = now + rng.exponential(config.mu);
    } else {
      now = repair_at;
      --broken;
      repair_at = broken > 0 ? now + rng.exponential(config.mu) : kInf;
    }
  }
}

namespace {

double one_lifetime(const SystemConfig& config, int j0, Engine engine,
                    RandomSource& rng) {
  return engine == Engine::EmbeddedChain
             ? simulate_lifetime_embedded(config, j0, rng)
             : simulate_lifetime_event_driven(config, j0, rng);
}

}  // namespace

std::vector<double> raw_lifetimes(const SystemConfig& config, int j0,
                                  std::int64_t count, std::uint64_t seed,
                                  Engine engine) {
  if (count < 1) throw DomainError("raw_lifetimes: count must be >= 1");
  if (j0 < 0 || j0 > config.n - 1) {
    throw DomainError("raw_lifetimes: j0 must be in [0, n-1]");
  }
  std::vector<double> samples(static_cast<std::size_t>(count));
  bool overrun = false;
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      RandomSource rng(RandomSource::child_seed(seed, static_cast<std::uint64_t>(i)));
      samples[static_cast<std::size_t>(i)] = one_lifetime(config, j0, engine, rng);
    } catch (const SimulationOverrun&) {
#pragma omp atomic write
      overrun = true;
    }
  }
  if (overrun) throw SimulationOverrun("a replication exceeded the period cap");
  return samples;
}

EmpiricalDistribution run_batch(const SystemConfig& config, int j0,
                                std::int64_t count, std::uint64_t seed,
                                Engine engine) {
  return EmpiricalDistribution::from_samples(
      raw_lifetimes(config, j0, count, seed, engine), seed, engine);
}

EmpiricalDistribution run_batch_serial(const SystemConfig& config, int j0,
                                       std::int64_t count, std::uint64_t seed,
                                       Engine engine) {
  if (count < 1) throw DomainError("run_batch_serial: count must be >= 1");
  std::vector<double> samples(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    RandomSource rng(RandomSource::child_seed(seed, static_cast<std::uint64_t>(i)));
    samples[static_cast<std::size_t>(i)] = one_lifetime(config, j0, engine, rng);
  }
  return EmpiricalDistribution::from_samples(std::move(samples), seed, engine);
}

double ks_distance(const EmpiricalDistribution& emp,
                   const std::function<double(double)>& cdf) {
  const double n = static_cast<double>(emp.count);
  double worst = 0.0;
  for (std::int64_t i = 0; i < emp.count; ++i) {
    const double f = cdf(emp.samples[static_cast<std::size_t>(i)]);
    if (f < 0.0 || f > 1.0) {
      throw DomainError("ks_distance: cdf value outside [0,1]");
    }
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    worst = std::max({worst, f - lo, hi - f});
  }
  return worst;
}

double two_sample_ks(const EmpiricalDistribution& a,
                     const EmpiricalDistribution& b) {
  const double na = static_cast<double>(a.count);
  const double nb = static_cast<double>(b.count);
  std::size_t i = 0, j = 0;
  double worst = 0.0;
  while (i < a.samples.size() && j < b.samples.size()) {
    const double xa = a.samples[i];
    const double xb = b.samples[j];
    if (xa <= xb) {
      while (i < a.samples.size() && a.samples[i] == xa) ++i;
    }
    if (xb <= xa) {
      while (j < b.samples.size() && b.samples[j] == xb) ++j;
    }
    worst = std::max(worst, std::abs(static_cast<double>(i) / na -
                                     static_cast<double>(j) / nb));
  }
  return worst;
}

}  // namespace standby

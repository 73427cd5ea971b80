#include "standby/dist.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "quadrature.hpp"
#include "standby/errors.hpp"

namespace standby {

namespace {

constexpr double kQuadTol = 1e-10;        // absolute quadrature tolerance
constexpr double kTailMass = 1e-12;       // quantile cutoff for panels
constexpr double kPoissonTail = 1e-12;    // truncation rule for g_j sums

void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

// log of (mu*x)^j / j!, for the Poisson weight factors
double log_pois_weight(int j, double mux) {
  if (j == 0) return 0.0;
  return j * std::log(mux) - std::lgamma(j + 1.0);
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::Exponential: return "exponential";
    case Family::Erlang: return "erlang";
    case Family::Deterministic: return "deterministic";
    case Family::Uniform: return "uniform";
    case Family::Hyperexponential: return "hyperexponential";
    case Family::Weibull: return "weibull";
    case Family::Lognormal: return "lognormal";
  }
  return "?";
}

DistributionSpec DistributionSpec::exponential(double rate) {
  DistributionSpec s;
  s.family = Family::Exponential;
  s.rate = rate;
  return s;
}

DistributionSpec DistributionSpec::erlang(int shape_k, double rate) {
  DistributionSpec s;
  s.family = Family::Erlang;
  s.shape_k = shape_k;
  s.rate = rate;
  return s;
}

DistributionSpec DistributionSpec::deterministic(double value) {
  DistributionSpec s;
  s.family = Family::Deterministic;
  s.value = value;
  return s;
}

DistributionSpec DistributionSpec::uniform(double lo, double hi) {
  DistributionSpec s;
  s.family = Family::Uniform;
  s.lo = lo;
  s.hi = hi;
  return s;
}

DistributionSpec DistributionSpec::hyperexponential(std::vector<double> weights,
                                                    std::vector<double> rates) {
  DistributionSpec s;
  s.family = Family::Hyperexponential;
  s.weights = std::move(weights);
  s.rates = std::move(rates);
  return s;
}

DistributionSpec DistributionSpec::weibull(double shape, double scale) {
  DistributionSpec s;
  s.family = Family::Weibull;
  s.shape = shape;
  s.scale = scale;
  return s;
}

DistributionSpec DistributionSpec::lognormal(double log_mean, double log_sd) {
  DistributionSpec s;
  s.family = Family::Lognormal;
  s.log_mean = log_mean;
  s.log_sd = log_sd;
  return s;
}

void DistributionSpec::validate() const {
  switch (family) {
    case Family::Exponential:
      require(rate > 0, "exponential: rate must be > 0");
      break;
    case Family::Erlang:
      require(shape_k >= 1, "erlang: shape must be >= 1");
      require(rate > 0, "erlang: rate must be > 0");
      break;
    case Family::Deterministic:
      require(value > 0, "deterministic: value must be > 0");
      break;
    case Family::Uniform:
      require(lo >= 0, "uniform: lo must be >= 0");
      require(hi > lo, "uniform: hi must be > lo");
      break;
    case Family::Hyperexponential: {
      require(!weights.empty() && weights.size() == rates.size(),
              "hyperexponential: weights and rates must be nonempty and "
              "equal-length");
      double total = 0;
      for (double w : weights) {
        require(w > 0, "hyperexponential: weights must be > 0");
        total += w;
      }
      for (double r : rates) {
        require(r > 0, "hyperexponential: rates must be > 0");
      }
      require(std::abs(total - 1.0) < 1e-9,
              "hyperexponential: weights must sum to 1");
      break;
    }
    case Family::Weibull:
      require(shape > 0, "weibull: shape must be > 0");
      require(scale > 0, "weibull: scale must be > 0");
      break;
    case Family::Lognormal:
      require(log_sd > 0, "lognormal: log_sd must be > 0");
      break;
  }
}

WorkingTimeModel::WorkingTimeModel(DistributionSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  switch (spec_.family) {
    case Family::Exponential:
      mean_ = 1.0 / spec_.rate;
      break;
    case Family::Erlang:
      mean_ = spec_.shape_k / spec_.rate;
      break;
    case Family::Deterministic:
      mean_ = spec_.value;
      break;
    case Family::Uniform:
      mean_ = 0.5 * (spec_.lo + spec_.hi);
      break;
    case Family::Hyperexponential:
      mean_ = 0.0;
      for (std::size_t i = 0; i < spec_.weights.size(); ++i) {
        mean_ += spec_.weights[i] / spec_.rates[i];
      }
      break;
    case Family::Weibull:
      mean_ = spec_.scale * std::tgamma(1.0 + 1.0 / spec_.shape);
      break;
    case Family::Lognormal:
      mean_ = std::exp(spec_.log_mean + 0.5 * spec_.log_sd * spec_.log_sd);
      break;
  }
  backend_ = (spec_.family == Family::Weibull ||
              spec_.family == Family::Lognormal)
                 ? TransformBackend::Quadrature
                 : TransformBackend::ClosedForm;
}

double WorkingTimeModel::sample(RandomSource& rng) const {
  switch (spec_.family) {
    case Family::Exponential:
      return rng.exponential(spec_.rate);
    case Family::Erlang: {
      double t = 0;
      for (int i = 0; i < spec_.shape_k; ++i) t += rng.exponential(spec_.rate);
      return t;
    }
    case Family::Deterministic:
      return spec_.value;
    case Family::Uniform:
      return spec_.lo + (spec_.hi - spec_.lo) * rng.uniform();
    case Family::Hyperexponential: {
      double u = rng.uniform();
      std::size_t i = 0;
      for (; i + 1 < spec_.weights.size(); ++i) {
        if (u < spec_.weights[i]) break;
        u -= spec_.weights[i];
      }
      return rng.exponential(spec_.rates[i]);
    }
    case Family::Weibull:
      return spec_.scale *
             std::pow(-std::log(rng.uniform()), 1.0 / spec_.shape);
    case Family::Lognormal:
      return std::exp(spec_.log_mean + spec_.log_sd * rng.normal());
  }
  return 0;
}

double WorkingTimeModel::cdf(double x) const {
  if (x <= 0) return 0.0;
  switch (spec_.family) {
    case Family::Exponential:
      return -std::expm1(-spec_.rate * x);
    case Family::Erlang: {
      // 1 - e^{-lx} sum_{i<k} (lx)^i / i!   (integer shape)
      const double lx = spec_.rate * x;
      double term = 1.0, sum = 1.0;
      for (int i = 1; i < spec_.shape_k; ++i) {
        term *= lx / i;
        sum += term;
      }
      return 1.0 - std::exp(-lx) * sum;
    }
    case Family::Deterministic:
      return x >= spec_.value ? 1.0 : 0.0;
    case Family::Uniform:
      if (x <= spec_.lo) return 0.0;
      if (x >= spec_.hi) return 1.0;
      return (x - spec_.lo) / (spec_.hi - spec_.lo);
    case Family::Hyperexponential: {
      double c = 0;
      for (std::size_t i = 0; i < spec_.weights.size(); ++i) {
        c += spec_.weights[i] * -std::expm1(-spec_.rates[i] * x);
      }
      return c;
    }
    case Family::Weibull:
      return -std::expm1(-std::pow(x / spec_.scale, spec_.shape));
    case Family::Lognormal:
      return 0.5 * std::erfc(-(std::log(x) - spec_.log_mean) /
                             (spec_.log_sd * std::sqrt(2.0)));
  }
  return 0;
}

double WorkingTimeModel::density(double x) const {
  if (x <= 0) return 0.0;
  switch (spec_.family) {
    case Family::Exponential:
      return spec_.rate * std::exp(-spec_.rate * x);
    case Family::Erlang: {
      const int k = spec_.shape_k;
      return std::exp(k * std::log(spec_.rate) + (k - 1) * std::log(x) -
                      spec_.rate * x - std::lgamma(k));
    }
    case Family::Deterministic:
      throw DomainError("deterministic law has no density");
    case Family::Uniform:
      return (x >= spec_.lo && x <= spec_.hi)
                 ? 1.0 / (spec_.hi - spec_.lo)
                 : 0.0;
    case Family::Hyperexponential: {
      double d = 0;
      for (std::size_t i = 0; i < spec_.weights.size(); ++i) {
        d += spec_.weights[i] * spec_.rates[i] *
             std::exp(-spec_.rates[i] * x);
      }
      return d;
    }
    case Family::Weibull: {
      const double z = x / spec_.scale;
      return spec_.shape / spec_.scale * std::pow(z, spec_.shape - 1.0) *
             std::exp(-std::pow(z, spec_.shape));
    }
    case Family::Lognormal: {
      const double z = (std::log(x) - spec_.log_mean) / spec_.log_sd;
      return std::exp(-0.5 * z * z) /
             (x * spec_.log_sd * std::sqrt(2.0 * 3.14159265358979323846));
    }
  }
  return 0;
}

double WorkingTimeModel::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile: p must be in (0,1)");
  switch (spec_.family) {
    case Family::Exponential:
      return -std::log1p(-p) / spec_.rate;
    case Family::Deterministic:
      return spec_.value;
    case Family::Uniform:
      return spec_.lo + p * (spec_.hi - spec_.lo);
    case Family::Weibull:
      return spec_.scale * std::pow(-std::log1p(-p), 1.0 / spec_.shape);
    default: {
      // monotone bisection on the CDF
      double lo = 0.0, hi = std::max(1.0, mean_);
      while (cdf(hi) < p) hi *= 2.0;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (cdf(mid) < p) lo = mid; else hi = mid;
        if (hi - lo < 1e-14 * std::max(1.0, hi)) break;
      }
      return 0.5 * (lo + hi);
    }
  }
}

namespace {

// Integrate integrand(x) dG(x) with panels split at the spec's quantiles
// (integrands are sharply peaked near 0 for large mu).
std::complex<double> integrate_against(const WorkingTimeModel& m,
                                       const detail::Integrand& f) {
  const auto& spec = m.spec();
  if (spec.family == Family::Deterministic) return f(spec.value);
  double x_lo = (spec.family == Family::Uniform) ? spec.lo : 0.0;
  double x_hi = m.quantile(1.0 - kTailMass);
  std::vector<double> cuts = {x_lo};
  for (double q : {0.5, 0.9, 0.99, 0.999}) {
    const double x = m.quantile(q);
    if (x > cuts.back() && x < x_hi) cuts.push_back(x);
  }
  cuts.push_back(x_hi);
  auto weighted = [&](double x) { return f(x) * m.density(x); };
  std::complex<double> acc = 0.0;
  const double tol = kQuadTol / static_cast<double>(cuts.size());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    acc += detail::integrate(weighted, cuts[i], cuts[i + 1], tol);
  }
  return acc;
}

bool has_closed_weighted(Family f) {
  return f == Family::Exponential || f == Family::Erlang ||
         f == Family::Deterministic || f == Family::Hyperexponential ||
         f == Family::Uniform;
}

// Poisson CDF e^{-z} sum_{i<=j} z^i / i!, for complex z with Re(z) >= 0.
std::complex<double> poisson_cdf(int j, std::complex<double> z) {
  std::complex<double> term = std::exp(-z);
  std::complex<double> sum = term;
  for (int i = 1; i <= j; ++i) {
    term *= z / static_cast<double>(i);
    sum += term;
  }
  return sum;
}

// g_j(s) for a single exponential component with rate lambda.
std::complex<double> exp_weighted(double lambda, int j, std::complex<double> s,
                                  double mu) {
  const std::complex<double> den = s + mu + lambda;
  return lambda / den * std::pow(mu / den, j);
}

}  // namespace

std::complex<double> WorkingTimeModel::lst(std::complex<double> s) const {
  switch (spec_.family) {
    case Family::Exponential:
      return spec_.rate / (spec_.rate + s);
    case Family::Erlang:
      return std::pow(spec_.rate / (spec_.rate + s), spec_.shape_k);
    case Family::Deterministic:
      return std::exp(-s * spec_.value);
    case Family::Uniform: {
      const double w = spec_.hi - spec_.lo;
      if (std::abs(s) * spec_.hi < 1e-6) {
        // second-order expansion; remainder below 1e-18 here
        const double m1 = 0.5 * (spec_.lo + spec_.hi);
        const double m2 = (spec_.hi * spec_.hi * spec_.hi -
                           spec_.lo * spec_.lo * spec_.lo) / (3.0 * w);
        return 1.0 - s * m1 + 0.5 * s * s * m2;
      }
      return (std::exp(-s * spec_.lo) - std::exp(-s * spec_.hi)) / (s * w);
    }
    case Family::Hyperexponential: {
      std::complex<double> g = 0.0;
      for (std::size_t i = 0; i < spec_.weights.size(); ++i) {
        g += spec_.weights[i] * spec_.rates[i] / (spec_.rates[i] + s);
      }
      return g;
    }
    default:
      return lst_quadrature(s);
  }
}

double WorkingTimeModel::epsilon(double mu) const {
  if (mu < 0) throw DomainError("epsilon: mu must be >= 0");
  return lst(mu).real();
}

std::complex<double> WorkingTimeModel::weighted_lst(int j,
                                                    std::complex<double> s,
                                                    double mu) const {
  if (j < 0) throw DomainError("weighted_lst: j must be >= 0");
  if (j == 0) return lst(s + mu);  // g_0(s) = g(s + mu) for every family
  if (!has_closed_weighted(spec_.family)) {
    return weighted_lst_quadrature(j, s, mu);
  }
  switch (spec_.family) {
    case Family::Exponential:
      return exp_weighted(spec_.rate, j, s, mu);
    case Family::Erlang: {
      const int k = spec_.shape_k;
      const std::complex<double> den = s + mu + spec_.rate;
      const double binom =
          std::exp(std::lgamma(j + k) - std::lgamma(j + 1.0) - std::lgamma(k));
      return binom * std::pow(spec_.rate / den, k) * std::pow(mu / den, j);
    }
    case Family::Deterministic: {
      const double d = spec_.value;
      return std::exp(-(s + mu) * d + log_pois_weight(j, mu * d));
    }
    case Family::Uniform: {
      // integral of x^j e^{-ax} over [lo, hi] in terms of Poisson CDFs
      const std::complex<double> a = s + mu;
      return std::pow(mu / a, j) / (a * (spec_.hi - spec_.lo)) *
             (poisson_cdf(j, a * spec_.lo) - poisson_cdf(j, a * spec_.hi));
    }
    case Family::Hyperexponential: {
      std::complex<double> g = 0.0;
      for (std::size_t i = 0; i < spec_.weights.size(); ++i) {
        g += spec_.weights[i] * exp_weighted(spec_.rates[i], j, s, mu);
      }
      return g;
    }
    default:
      return 0.0;  // unreachable
  }
}

double WorkingTimeModel::gamma_weight(int j, double mu) const {
  if (j < 0) throw DomainError("gamma_weight: j must be >= 0");
  if (!(mu > 0)) throw DomainError("gamma_weight: mu must be > 0");
  // x (mu x)^j / j! = ((j+1)/mu) (mu x)^{j+1} / (j+1)!, so gamma_j is a
  // rescaled g_{j+1}(0); this inherits the closed forms automatically
  return (j + 1) / mu * weighted_lst(j + 1, 0.0, mu).real();
}

std::complex<double> WorkingTimeModel::lst_quadrature(
    std::complex<double> s) const {
  return integrate_against(*this,
                           [s](double x) { return std::exp(-s * x); });
}

std::complex<double> WorkingTimeModel::weighted_lst_quadrature(
    int j, std::complex<double> s, double mu) const {
  return integrate_against(*this, [j, s, mu](double x) -> std::complex<double> {
    if (x <= 0.0) return j == 0 ? std::complex<double>(1.0) : 0.0;
    return std::exp(-(s + mu) * x + log_pois_weight(j, mu * x));
  });
}

double WorkingTimeModel::gamma_weight_quadrature(int j, double mu) const {
  return integrate_against(*this, [j, mu](double x) -> std::complex<double> {
    if (x <= 0.0) return 0.0;
    return x * std::exp(-mu * x + log_pois_weight(j, mu * x));
  }).real();
}

int WorkingTimeModel::truncation_index(double mu) const {
  if (!(mu > 0)) throw DomainError("truncation_index: mu must be > 0");
  const double x_max = (spec_.family == Family::Deterministic)
                           ? spec_.value
                           : quantile(1.0 - kTailMass);
  const double lam = mu * x_max;
  if (lam == 0.0) return 0;
  if (lam < 700.0) {
    double pmf = std::exp(-lam);
    double cum = pmf;
    int j = 0;
    while (1.0 - cum > kPoissonTail && j < 100000) {
      ++j;
      pmf *= lam / j;
      cum += pmf;
    }
    return j;
  }
  // Chernoff bound P(X >= a) <= exp(-lam * h(a/lam)), h(x) = x ln x - x + 1
  const double target = -std::log(kPoissonTail);
  int lo = static_cast<int>(lam);
  int hi = static_cast<int>(lam + 20.0 * std::sqrt(lam) + 20.0);
  auto exponent = [lam](int a) {
    const double r = a / lam;
    return lam * (r * std::log(r) - r + 1.0);
  };
  while (lo + 1 < hi) {
    const int mid = (lo + hi) / 2;
    if (exponent(mid) >= target) hi = mid; else lo = mid;
  }
  return hi;
}

}  // namespace standby

#pragma once

#include <complex>
#include <string>
#include <vector>

#include "standby/rng.hpp"

namespace standby {

enum class Family {
  Exponential,
  Erlang,
  Deterministic,
  Uniform,
  Hyperexponential,
  Weibull,
  Lognormal,
};

std::string family_name(Family f);

/// Parameterization of the working-time law G. Use the factory functions;
/// validate() rejects anything outside the admissible domain.
struct DistributionSpec {
  Family family = Family::Exponential;
  double rate = 1.0;                   // Exponential, Erlang
  int shape_k = 1;                     // Erlang
  double value = 1.0;                  // Deterministic
  double lo = 0.0, hi = 1.0;           // Uniform
  std::vector<double> weights, rates;  // Hyperexponential
  double shape = 1.0, scale = 1.0;     // Weibull
  double log_mean = 0.0, log_sd = 1.0; // Lognormal

  static DistributionSpec exponential(double rate);
  static DistributionSpec erlang(int shape_k, double rate);
  static DistributionSpec deterministic(double value);
  static DistributionSpec uniform(double lo, double hi);
  static DistributionSpec hyperexponential(std::vector<double> weights,
                                           std::vector<double> rates);
  static DistributionSpec weibull(double shape, double scale);
  static DistributionSpec lognormal(double log_mean, double log_sd);

  void validate() const;  // throws ValidationError
};

enum class TransformBackend { ClosedForm, Quadrature };

/// The working-time distribution G with its mean b, sampling, and the
/// transform family g(s), g_j(s), gamma_j(mu) consumed by the lifetime
/// equations. Immutable after construction; safe for concurrent reads.
class WorkingTimeModel {
 public:
  explicit WorkingTimeModel(DistributionSpec spec);

  const DistributionSpec& spec() const { return spec_; }
  TransformBackend backend() const { return backend_; }

  /// The mean b of G.
  double mean() const { return mean_; }

  double sample(RandomSource& rng) const;

  /// g(s) = integral of e^{-sx} dG(x), Re(s) >= 0.
  std::complex<double> lst(std::complex<double> s) const;

  /// epsilon(mu) = g(mu) on the real axis: the probability that a repair
  /// outlasts one working period.
  double epsilon(double mu) const;

  /// g_j(s) = integral of e^{-(s+mu)x} (mu x)^j / j! dG(x).
  std::complex<double> weighted_lst(int j, std::complex<double> s,
                                    double mu) const;

  /// gamma_j(mu) = -d/ds g_j(s) at s=0
  ///             = integral of x (mu x)^j / j! e^{-mu x} dG(x).
  double gamma_weight(int j, double mu) const;

  double cdf(double x) const;
  double density(double x) const;   // continuous families only
  double quantile(double p) const;  // p in (0, 1)

  /// Smallest J such that the Poisson(mu * x_max) tail beyond J is below
  /// 1e-12, where x_max is the 1-1e-12 quantile of G. Partial sums of
  /// g_j(0) up to this J cover all but ~2e-12 of the total mass.
  int truncation_index(double mu) const;

  // Quadrature-path evaluations, exposed so tests can cross-check the
  // closed forms against direct integration.
  std::complex<double> lst_quadrature(std::complex<double> s) const;
  std::complex<double> weighted_lst_quadrature(int j, std::complex<double> s,
                                               double mu) const;
  double gamma_weight_quadrature(int j, double mu) const;

 private:
  DistributionSpec spec_;
  double mean_ = 0.0;
  TransformBackend backend_ = TransformBackend::ClosedForm;
};

}  // namespace standby

#include "standby/invert.hpp"

#include <algorithm>
#include <cmath>

#include "standby/errors.hpp"

namespace standby {

void InversionSettings::validate() const {
  if (terms < 5) throw ValidationError("inversion: terms must be >= 5");
  if (method == InversionMethod::GaverStehfest) {
    if (terms % 2 != 0) throw ValidationError("gaver-stehfest: terms must be even");
    if (terms > 18) {
      throw ValidationError(
          "gaver-stehfest: terms must be <= 18 in double precision");
    }
  }
}

namespace {

using Transform = std::function<std::complex<double>(std::complex<double>)>;

// Abate-Whitt Euler algorithm: alternating Fourier-series terms at
// abscissas (A + 2 pi i k) / (2t) with A = 2M ln(10)/3, accelerated by
// binomial (Euler) averaging of the partial sums. The gap between the
// order-M and order-(M-1) averages serves as the oscillation estimate.
InversionPoint euler_invert(const Transform& f_hat, double t, int m) {
  const double half_a = m * std::log(10.0) / 3.0;  // A/2
  const double scale = std::exp(half_a) / t;
  std::vector<double> partial(static_cast<std::size_t>(2 * m + 1));
  double sum = 0.5 * scale * f_hat({half_a / t, 0.0}).real();
  partial[0] = sum;
  for (int k = 1; k <= 2 * m; ++k) {
    const std::complex<double> s(half_a / t,
                                 3.14159265358979323846 * k / t);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    sum += scale * sign * f_hat(s).real();
    partial[static_cast<std::size_t>(k)] = sum;
  }
  auto euler_average = [&partial](int order) {
    double acc = 0.0;
    double binom = std::pow(2.0, -order);  // C(order,0) / 2^order
    for (int k = 0; k <= order; ++k) {
      acc += binom * partial[static_cast<std::size_t>(order + k)];
      binom *= static_cast<double>(order - k) / static_cast<double>(k + 1);
    }
    return acc;
  };
  const double value = euler_average(m);
  InversionPoint p;
  p.raw = value;
  p.value = std::clamp(value, 0.0, 1.0);
  p.unstable = std::abs(value - euler_average(m - 1)) > 1e-3;
  return p;
}

InversionPoint gaver_stehfest_invert(const Transform& f_hat, double t, int n) {
  const int half = n / 2;
  const double ln2 = std::log(2.0);
  double sum = 0.0;
  double last_increment = 0.0;
  for (int k = 1; k <= n; ++k) {
    double zeta = 0.0;
    const int j_lo = (k + 1) / 2;
    const int j_hi = std::min(k, half);
    for (int j = j_lo; j <= j_hi; ++j) {
      double term = std::pow(static_cast<double>(j), half) /
                    (std::tgamma(half - j + 1.0) * std::tgamma(j + 1.0));
      term *= std::exp(std::lgamma(2.0 * j + 1.0) - std::lgamma(j) -
                       std::lgamma(k - j + 1.0) -
                       std::lgamma(2.0 * j - k + 1.0));
      zeta += term;
    }
    if ((k + half) % 2 != 0) zeta = -zeta;
    last_increment =
        zeta * (ln2 / t) * f_hat({k * ln2 / t, 0.0}).real();
    sum += last_increment;
  }
  InversionPoint p;
  p.raw = sum;
  p.value = std::clamp(sum, 0.0, 1.0);
  p.unstable = false;
  return p;
}

}  // namespace

InversionPoint invert_law_point(
    const std::function<std::complex<double>(std::complex<double>)>& lst,
    double t, const InversionSettings& settings) {
  settings.validate();
  if (!(t > 0)) throw DomainError("inversion: t must be > 0");
  const bool tail = settings.target == InversionTarget::Tail;
  Transform f_hat = [&lst, tail](std::complex<double> s) {
    const std::complex<double> phi = lst(s);
    return tail ? (1.0 - phi) / s : phi / s;
  };
  InversionPoint p =
      settings.method == InversionMethod::EulerAbateWhitt
          ? euler_invert(f_hat, t, settings.terms)
          : gaver_stehfest_invert(f_hat, t, settings.terms);
  if (tail) {
    p.raw = 1.0 - p.raw;
    p.value = std::clamp(p.raw, 0.0, 1.0);
  }
  return p;
}

double invert_cdf(const SystemConfig& config, int j, double t,
                  const InversionSettings& settings) {
  if (j < 0 || j > config.n - 1) throw DomainError("invert_cdf: bad state index");
  auto lst = [&config, j](std::complex<double> s) {
    return solve_phis(config, s).phis[static_cast<std::size_t>(j)];
  };
  const InversionPoint p = invert_law_point(lst, t, settings);
  if (p.raw < -1e-4 || p.raw > 1.0 + 1e-4) {
    throw InversionUnstable("inverted CDF overshoots [0,1] beyond 1e-4");
  }
  return p.value;
}

InversionCurve invert_curve(const SystemConfig& config, int j,
                            const std::vector<double>& t_grid,
                            const InversionSettings& settings) {
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (t_grid[i] <= 0 || (i > 0 && t_grid[i] <= t_grid[i - 1])) {
      throw DomainError("invert_curve: grid must be positive and strictly increasing");
    }
  }
  InversionCurve curve;
  curve.t = t_grid;
  for (double t : t_grid) {
    auto lst = [&config, j](std::complex<double> s) {
      return solve_phis(config, s).phis[static_cast<std::size_t>(j)];
    };
    const InversionPoint p = invert_law_point(lst, t, settings);
    curve.cdf.push_back(p.value);
    curve.flags.push_back(p.unstable ? "unstable" : "");
  }
  for (std::size_t i = 1; i < curve.cdf.size(); ++i) {
    if (curve.cdf[i] < curve.cdf[i - 1] - 1e-4) {
      if (!curve.flags[i].empty()) curve.flags[i] += "|";
      curve.flags[i] += "nonmonotone";
    }
  }
  return curve;
}

}  // namespace standby

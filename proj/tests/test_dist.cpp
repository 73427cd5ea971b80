#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "standby/dist.hpp"
#include "standby/errors.hpp"
#include "standby/sim.hpp"

using namespace standby;
using cd = std::complex<double>;

namespace {

std::vector<DistributionSpec> closed_form_specs() {
  return {DistributionSpec::exponential(1.3),
          DistributionSpec::erlang(2, 1.7),
          DistributionSpec::deterministic(0.8),
          DistributionSpec::uniform(0.5, 2.0),
          DistributionSpec::hyperexponential({0.3, 0.7}, {0.5, 2.0})};
}

std::vector<DistributionSpec> all_specs() {
  auto specs = closed_form_specs();
  specs.push_back(DistributionSpec::weibull(1.5, 1.0));
  specs.push_back(DistributionSpec::lognormal(0.0, 0.5));
  return specs;
}

}  // namespace

TEST_CASE("analytic means") {
  CHECK(WorkingTimeModel(DistributionSpec::exponential(1)).mean() == doctest::Approx(1.0));
  CHECK(WorkingTimeModel(DistributionSpec::deterministic(2.5)).mean() == doctest::Approx(2.5));
  CHECK(WorkingTimeModel(DistributionSpec::erlang(3, 2)).mean() == doctest::Approx(1.5));
  CHECK(WorkingTimeModel(DistributionSpec::uniform(0, 2)).mean() == doctest::Approx(1.0));
  CHECK(WorkingTimeModel(DistributionSpec::hyperexponential({0.5, 0.5}, {1, 2})).mean() ==
        doctest::Approx(0.75));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(DistributionSpec::exponential(0).validate(), ValidationError);
  CHECK_THROWS_AS(DistributionSpec::erlang(0, 1).validate(), ValidationError);
  CHECK_THROWS_AS(DistributionSpec::uniform(2, 1).validate(), ValidationError);
  CHECK_THROWS_AS(DistributionSpec::hyperexponential({0.5, 0.2}, {1, 2}).validate(),
                  ValidationError);
  CHECK_THROWS_AS(DistributionSpec::weibull(-1, 1).validate(), ValidationError);
  CHECK_THROWS_AS(DistributionSpec::lognormal(0, 0).validate(), ValidationError);
}

TEST_CASE("transform point values") {
  WorkingTimeModel ex(DistributionSpec::exponential(1));
  CHECK(ex.lst(1.0).real() == doctest::Approx(0.5).epsilon(1e-12));
  WorkingTimeModel det(DistributionSpec::deterministic(1));
  CHECK(det.lst(2.0).real() == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  for (const auto& spec : all_specs()) {
    WorkingTimeModel m(spec);
    CHECK(std::abs(m.lst(0.0) - 1.0) < 1e-9);  // g(0) = 1
  }
}

TEST_CASE("epsilon values and monotone decay") {
  WorkingTimeModel ex(DistributionSpec::exponential(1));
  CHECK(ex.epsilon(0.0) == doctest::Approx(1.0));
  CHECK(ex.epsilon(50.0) == doctest::Approx(1.0 / 51).epsilon(1e-12));
  WorkingTimeModel det(DistributionSpec::deterministic(1));
  CHECK(det.epsilon(5.0) == doctest::Approx(std::exp(-5.0)).epsilon(1e-12));
  for (const auto& spec : all_specs()) {
    WorkingTimeModel m(spec);
    double prev = m.epsilon(0.0);
    CHECK(prev == doctest::Approx(1.0));
    const double mu_max = 200.0 / m.mean();
    for (double mu = mu_max / 64; mu <= mu_max; mu *= 2) {
      const double e = m.epsilon(mu);
      CHECK(e < prev);
      prev = e;
    }
    // Decay rate is family-dependent (1/mu for heavy mixtures, e^{-mu d}
    // for point masses), so only a loose absolute bound is portable here.
    CHECK(m.epsilon(mu_max) < 1e-2);
  }
}

TEST_CASE("weighted transform values") {
  WorkingTimeModel det(DistributionSpec::deterministic(1));
  CHECK(det.weighted_lst(0, 0.0, 2.0).real() ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  WorkingTimeModel ex(DistributionSpec::exponential(1));
  CHECK(ex.weighted_lst(1, 0.0, 1.0).real() == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("partial sums of g_j recover g") {
  for (const auto& spec : closed_form_specs()) {
    WorkingTimeModel m(spec);
    const double mu = 3.0;
    const int big_j = m.truncation_index(mu);
    for (cd s : {cd(0, 0), cd(1.0 / m.mean(), 0), cd(0.5, 1.2)}) {
      cd sum = 0.0;
      double prev_real = -1.0;
      for (int j = 0; j <= big_j; ++j) {
        sum += m.weighted_lst(j, s, mu);
        if (s == cd(0, 0)) {
          CHECK(sum.real() >= prev_real);  // nondecreasing partial sums
          prev_real = sum.real();
        }
      }
      CHECK(std::abs(sum - m.lst(s)) < 1e-10);
    }
  }
}

TEST_CASE("gamma weights") {
  WorkingTimeModel det(DistributionSpec::deterministic(1));
  CHECK(det.gamma_weight(0, 2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  WorkingTimeModel ex(DistributionSpec::exponential(1));
  CHECK(ex.gamma_weight(0, 1.0) == doctest::Approx(0.25).epsilon(1e-12));
  for (const auto& spec : all_specs()) {
    WorkingTimeModel m(spec);
    double prev = m.gamma_weight(0, 1.0);
    for (double mu : {4.0, 16.0, 64.0, 256.0}) {
      const double g = m.gamma_weight(0, mu / m.mean());
      CHECK(g < prev);
      prev = g;
    }
  }
}

TEST_CASE("quadrature backend matches closed forms") {
  for (const auto& spec : closed_form_specs()) {
    if (spec.family == Family::Deterministic) continue;  // point mass
    WorkingTimeModel m(spec);
    for (cd s : {cd(0, 0), cd(0.3, 0), cd(1, 0), cd(3, 0), cd(1, 1), cd(0.5, -2)}) {
      CHECK(std::abs(m.lst(s) - m.lst_quadrature(s)) < 1e-8);
      for (double mu : {0.7, 4.0}) {
        for (int j : {0, 1, 3}) {
          CHECK(std::abs(m.weighted_lst(j, s, mu) -
                         m.weighted_lst_quadrature(j, s, mu)) < 1e-8);
        }
      }
    }
    for (double mu : {0.7, 4.0}) {
      for (int j : {0, 1, 2}) {
        CHECK(m.gamma_weight(j, mu) ==
              doctest::Approx(m.gamma_weight_quadrature(j, mu)).epsilon(1e-7));
      }
    }
  }
}

TEST_CASE("transform bounded on the right half plane") {
  for (const auto& spec : all_specs()) {
    WorkingTimeModel m(spec);
    for (double re : {0.0, 0.5, 2.0, 10.0}) {
      for (double im : {-5.0, 0.0, 1.0, 7.0}) {
        CHECK(std::abs(m.lst({re, im})) <= 1.0 + 1e-9);
      }
    }
  }
}

TEST_CASE("finite difference of g_j at 0 matches -gamma_j") {
  for (const auto& spec : all_specs()) {
    WorkingTimeModel m(spec);
    const double h = 1e-6 * std::max(1.0, m.mean());
    for (double mu : {1.0, 5.0}) {
      for (int j : {0, 1, 2}) {
        const double central = (m.weighted_lst(j, cd(h, 0), mu).real() -
                                m.weighted_lst(j, cd(-h, 0), mu).real()) /
                               (2 * h);
        const double gamma = m.gamma_weight(j, mu);
        if (gamma > 1e-14) {
          CHECK(-central == doctest::Approx(gamma).epsilon(1e-6));
        }
      }
    }
  }
}

TEST_CASE("sampling: deterministic and moment checks") {
  WorkingTimeModel det(DistributionSpec::deterministic(1));
  RandomSource rng(123);
  for (int i = 0; i < 10; ++i) CHECK(det.sample(rng) == 1.0);

  WorkingTimeModel ex(DistributionSpec::exponential(1));
  RandomSource rng2(2024);
  double sum = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) sum += ex.sample(rng2);
  CHECK(std::abs(sum / n - 1.0) < 0.005);
}

TEST_CASE("sampling: uniform ECDF against analytic CDF") {
  WorkingTimeModel un(DistributionSpec::uniform(0, 2));
  RandomSource rng(77);
  std::vector<double> draws(1000000);
  for (auto& x : draws) x = un.sample(rng);
  auto emp = EmpiricalDistribution::from_samples(std::move(draws), 77,
                                                 Engine::EmbeddedChain);
  CHECK(ks_distance(emp, [&](double x) { return un.cdf(x); }) < 0.002);
}

TEST_CASE("sampling: weibull and lognormal match their CDFs") {
  for (const auto& spec : {DistributionSpec::weibull(1.5, 1.0),
                           DistributionSpec::lognormal(0.0, 0.5)}) {
    WorkingTimeModel m(spec);
    RandomSource rng(31);
    std::vector<double> draws(200000);
    for (auto& x : draws) x = m.sample(rng);
    auto emp = EmpiricalDistribution::from_samples(std::move(draws), 31,
                                                   Engine::EmbeddedChain);
    CHECK(ks_distance(emp, [&](double x) { return m.cdf(x); }) <
          1.63 / std::sqrt(200000.0));
  }
}

TEST_CASE("quantile inverts the CDF") {
  for (const auto& spec : all_specs()) {
    WorkingTimeModel m(spec);
    if (spec.family == Family::Deterministic) continue;
    for (double p : {0.1, 0.5, 0.9, 0.999}) {
      CHECK(m.cdf(m.quantile(p)) == doctest::Approx(p).epsilon(1e-8));
    }
  }
}

TEST_CASE("stream is a deterministic function of the seed") {
  WorkingTimeModel m(DistributionSpec::lognormal(0.2, 0.7));
  RandomSource a(99), b(99);
  for (int i = 0; i < 100; ++i) CHECK(m.sample(a) == m.sample(b));
}

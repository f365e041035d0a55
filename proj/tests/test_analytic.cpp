#include <doctest.h>

#include <cmath>

#include "bayesfuse/analytic.hpp"
#include "bayesfuse/builtin.hpp"
#include "bayesfuse/errors.hpp"
#include "bayesfuse/fusion.hpp"
#include "bayesfuse/montecarlo.hpp"
#include "bayesfuse/quadrature.hpp"
#include "test_support.hpp"

using namespace bayesfuse;
namespace an = bayesfuse::analytic;

TEST_CASE("gauss oracle point values") {
  an::GaussParams p{1.0, 1.0, 2};
  const double a2[2] = {1.0, 1.0};
  CHECK(an::gauss_fusion(p, a2) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  const double zeros[2] = {0.0, 0.0};
  CHECK(an::gauss_fusion(p, zeros) == 0.0);
  CHECK(an::gauss_risk(p) == 1.0 / 3.0);  // exact

  an::GaussParams p300{1.0, 1.0, 300};
  std::vector<double> ones(300, 1.0);
  CHECK(an::gauss_fusion(p300, ones) == doctest::Approx(300.0 / 301.0).epsilon(1e-15));

  CHECK(an::gauss_performance(p, 0.0, 0.0) ==
        doctest::Approx(3.0 / (2.0 * std::sqrt(M_PI))).epsilon(1e-14));
}

TEST_CASE("gauss oracle performance rows are densities") {
  an::GaussParams p{1.0, 1.0, 2};
  for (double h : {-1.5, 0.0, 2.0}) {
    const double integral = testsupport::simpson(
        [&](double c) { return an::gauss_performance(p, c, h); }, -12.0, 12.0, 200000);
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("gauss oracle row peak sits at the prior-skewed center") {
  an::GaussParams p{1.0, 1.0, 2};
  for (double h : {-1.0, 0.5, 1.7}) {
    const double peak = p.M * p.u * p.u * h / (p.M * p.u * p.u + p.v);
    const double up = an::gauss_performance(p, peak + 1e-4, h);
    const double down = an::gauss_performance(p, peak - 1e-4, h);
    const double at = an::gauss_performance(p, peak, h);
    CHECK(at >= up);
    CHECK(at >= down);
  }
}

TEST_CASE("expo oracle point values") {
  an::ExpoParams p1{1};
  const double a[1] = {1.0};
  CHECK(an::expo_fusion(p1, a) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(an::expo_risk(p1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(an::expo_risk(an::ExpoParams{3}) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(an::expo_performance(an::ExpoParams{2}, 3.5, 1.0) == 0.0);  // beyond M+1
  CHECK_THROWS_AS(an::expo_performance(p1, 0.0, 1.0), InputError);
  CHECK_THROWS_AS(an::expo_performance(p1, -1.0, 1.0), InputError);
}

TEST_CASE("expo oracle performance rows are densities") {
  // Substituting t = (M+1)/c - 1 turns the c-integral over (0, M+1] into a
  // Gamma(M+1, h) integral, evaluated with Gauss-Laguerre: an independent
  // normalization oracle.
  const an::ExpoParams p{2};
  const double h = 1.0;
  const QuadratureRule rule = gauss_laguerre(64);
  double integral = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes[i];
    const double t = x / h;
    const double c = (p.M + 1.0) / (1.0 + t);
    // dc = -(M+1)/(1+t)^2 dt and dt = dx/h; e^{x} cancels the rule's weight.
    const double integrand_t = an::expo_performance(p, c, h) * (p.M + 1.0) / ((1.0 + t) * (1.0 + t));
    integral += rule.weights[i] * integrand_t * std::exp(x) / h;
  }
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("expo fusion outputs stay in (0, M+1]") {
  RandomStream rng(41, 0);
  for (int M : {1, 2, 3}) {
    an::ExpoParams p{M};
    for (int i = 0; i < 2000; ++i) {
      std::vector<double> a(M);
      for (double& x : a) x = rng.exponential(0.3);
      const double c = an::expo_fusion(p, a);
      CHECK(c > 0.0);
      CHECK(c <= M + 1.0);
    }
  }
}

TEST_CASE("poisson binary rates by enumeration") {
  const an::BinaryRates rates = an::poisson_binary_rates();
  CHECK(rates.false_positive == doctest::Approx(1.0 - 5.0 * std::exp(-2.0)).epsilon(1e-14));
  CHECK(rates.miss == doctest::Approx(13.0 * std::exp(-4.0)).epsilon(1e-14));
  CHECK(rates.false_positive == doctest::Approx(0.3233235838).epsilon(1e-9));
  CHECK(rates.miss == doctest::Approx(0.2381033056).epsilon(1e-9));
  // Complementarity: P(C=2|H=1) + P(C=1|H=1) = 1.
  const double correct_low = 5.0 * std::exp(-2.0);
  CHECK(rates.false_positive + correct_low == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("distributed gaussian composition oracle") {
  CHECK(an::pbpo_gauss(an::GaussParams{1.0, 1.0, 2}).risk ==
        doctest::Approx(an::gauss_risk(an::GaussParams{1.0, 1.0, 2})).epsilon(1e-15));
  CHECK(an::pbpo_gauss(an::GaussParams{1.0, 1.0, 10}).risk ==
        doctest::Approx(1.0 / 11.0).epsilon(1e-15));
  CHECK_THROWS_AS(an::pbpo_gauss(an::GaussParams{2.0, 1.0, 2}), UnsupportedConfigError);

  // The composed linear rule coincides with the centralized rule pointwise.
  const an::GaussParams p{1.0, 1.0, 10};
  const an::PbpoGauss sys = an::pbpo_gauss(p);
  RandomStream rng(43, 0);
  for (int i = 0; i < 10000; ++i) {
    std::vector<double> a(10);
    for (double& x : a) x = 3.0 * rng.normal();
    double s1 = 0.0, s2 = 0.0;
    for (int j = 0; j < 5; ++j) s1 += a[j];
    for (int j = 5; j < 10; ++j) s2 += a[j];
    const double composed = sys.system_coeff * (sys.local_coeff * s1 + sys.local_coeff * s2);
    CHECK(composed == doctest::Approx(an::gauss_fusion(p, a)).epsilon(1e-12));
  }
}

TEST_CASE("oracle/engine agreement on random in-distribution points") {
  SUBCASE("gaussian") {
    for (int M : {2, 4}) {
      an::GaussParams p{1.0, 1.0, M};
      const auto scenario =
          resolve_scenario_ref("builtin:gauss:u=1,v=1,M=" + std::to_string(M)).scenario;
      const auto batch = mc::draw_batch(*scenario, 1000, ProposalMode::Prior, 47);
      double max_err = 0.0;
      for (std::size_t l = 0; l < batch.size(); ++l) {
        max_err = std::max(max_err, std::abs(posterior_mean(*scenario, batch.row(l)) -
                                             an::gauss_fusion(p, batch.row(l))));
      }
      CHECK(max_err < 1e-8);
    }
  }
  SUBCASE("exponential") {
    for (int M : {1, 2, 3}) {
      an::ExpoParams p{M};
      const auto scenario = resolve_scenario_ref("builtin:expo:M=" + std::to_string(M)).scenario;
      const auto batch = mc::draw_batch(*scenario, 1000, ProposalMode::Prior, 53);
      double max_err = 0.0;
      for (std::size_t l = 0; l < batch.size(); ++l) {
        max_err = std::max(max_err, std::abs(posterior_mean(*scenario, batch.row(l)) -
                                             an::expo_fusion(p, batch.row(l))));
      }
      CHECK(max_err < 1e-6);
    }
  }
}

TEST_CASE("linear-rule risk closed form") {
  const an::GaussParams p{1.0, 1.0, 2};
  // The optimal coefficient recovers the optimal risk; detuned ones are worse.
  CHECK(an::gauss_linear_rule_risk(p, 1.0 / 3.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(an::gauss_linear_rule_risk(p, 0.5) > 1.0 / 3.0);
  CHECK(an::gauss_linear_rule_risk(p, 0.2) > 1.0 / 3.0);
}

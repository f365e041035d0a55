#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "bayesfuse/analytic.hpp"
#include "bayesfuse/builtin.hpp"
#include "bayesfuse/errors.hpp"
#include "bayesfuse/fusion.hpp"
#include "bayesfuse/montecarlo.hpp"

using namespace bayesfuse;

namespace {

std::shared_ptr<const Scenario> builtin_scenario(const std::string& ref) {
  return resolve_scenario_ref(ref).scenario;
}

}  // namespace

TEST_CASE("posterior mean: all-gaussian closed form") {
  const auto scenario = builtin_scenario("builtin:gauss:u=1,v=1,M=2");
  const double a[2] = {1.0, 1.0};
  CHECK(posterior_mean(*scenario, a) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("posterior mean: exponential closed form") {
  const auto scenario = builtin_scenario("builtin:expo:M=1");
  const double a[1] = {1.0};
  CHECK(posterior_mean(*scenario, a) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("posterior mean: a point-mass prior forces its point") {
  const ObjectSpace pts = ObjectSpace::points({1.0, 3.0, 5.0});
  const auto scenario = std::make_shared<Scenario>(
      pts, Prior::discrete(pts, {0.0, 1.0, 0.0}),
      std::vector<std::shared_ptr<const Sensor>>{
          GaussianSensor::tabulated({1.0, 3.0, 5.0}, {1.0, 3.0, 5.0}, {1.0, 1.0, 1.0})},
      DecisionSpace::interval(0.0, 10.0), CostFunction::squared_error());
  RandomStream rng(31, 0);
  for (int i = 0; i < 100; ++i) {
    const double a[1] = {rng.uniform_open(-5.0, 10.0)};
    CHECK(posterior_mean(*scenario, a) == doctest::Approx(3.0).epsilon(1e-15));
  }
}

TEST_CASE("fuse: two-class poisson example") {
  const auto scenario = builtin_scenario("builtin:poisson-binary");
  const FusionRule rule(scenario);
  const double a11[2] = {1.0, 1.0};
  CHECK(rule.fuse(a11) == 1.0);  // A + B <= 2
  const double a03[2] = {0.0, 3.0};
  CHECK(rule.fuse(a03) == 2.0);

  // Derived check: the posterior mean itself, by direct Bayes enumeration.
  // P(H|a,b) ~ 0.5 e^{-2h} h^{a+b}; for (0,3): r = P(2)/P(1) = e^{-2} 2^3.
  const double r = std::exp(-2.0) * 8.0;
  const double mean = (1.0 + 2.0 * r) / (1.0 + r);
  CHECK(rule.soft(a03) == doctest::Approx(mean).epsilon(1e-12));
  CHECK(mean > 1.5);

  // Every pair with A+B <= 2 decides 1; the rest decide 2.
  for (int a = 0; a <= 6; ++a) {
    for (int b = 0; b <= 6; ++b) {
      const double ab[2] = {static_cast<double>(a), static_cast<double>(b)};
      CHECK(rule.fuse(ab) == (a + b <= 2 ? 1.0 : 2.0));
    }
  }
}

TEST_CASE("fuse: four-class example far in the top region") {
  const auto scenario = builtin_scenario("builtin:fourclass-soft");
  const FusionRule rule(scenario);
  const double a[2] = {3.0, 3.0};
  const double c = rule.fuse(a);
  CHECK(c >= 2.0);
  CHECK(c <= 3.0);
}

TEST_CASE("range bound: interval decisions stay inside the object hull") {
  // For K an interval containing I, outputs lie in [min I, max I].
  const ObjectSpace pts = ObjectSpace::points({-1.0, 0.5, 2.0});
  const auto scenario = std::make_shared<Scenario>(
      pts, Prior::discrete(pts, {0.2, 0.5, 0.3}),
      std::vector<std::shared_ptr<const Sensor>>{
          GaussianSensor::tabulated({-1.0, 0.5, 2.0}, {-1.0, 0.5, 2.0}, {0.5, 2.0, 1.0})},
      DecisionSpace::interval(-10.0, 10.0), CostFunction::squared_error());
  const FusionRule rule(scenario);
  RandomStream rng(37, 0);
  for (int i = 0; i < 10000; ++i) {
    const double a[1] = {rng.uniform_open(-25.0, 25.0)};
    const double c = rule.fuse(a);
    CHECK(c >= -1.0);
    CHECK(c <= 2.0);
  }
}

TEST_CASE("gaussian rule depends on features only through their sum") {
  const auto scenario = builtin_scenario("builtin:gauss:u=1,v=1,M=4");
  const FusionRule rule(scenario);
  std::mt19937_64 gen(99);
  std::normal_distribution<double> dist;
  for (int i = 0; i < 10000; ++i) {
    std::vector<double> a(4);
    for (double& x : a) x = 2.0 * dist(gen);
    const double base = rule.fuse(a);

    // Reversal swaps the two sensor blocks and flips each block: bit-identical.
    std::vector<double> rev(a.rbegin(), a.rend());
    CHECK(rule.fuse(rev) == base);

    // Permutations inside each block are bit-identical (sorted accumulation).
    std::vector<double> in_block = {a[1], a[0], a[3], a[2]};
    CHECK(rule.fuse(in_block) == base);

    // An arbitrary cross-block permutation preserves the sum, hence the value
    // up to roundoff.
    std::vector<double> cross = {a[2], a[0], a[3], a[1]};
    CHECK(rule.fuse(cross) == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("poisson flips strictly increase the exact risk") {
  // Any single-pair flip of the optimal table increases the enumerated
  // quadratic Bayes risk, in both directions.
  const auto base_rule = [](int a, int b) { return a + b <= 2 ? 1 : 2; };
  const double base = analytic::poisson_binary_rule_risk(base_rule);
  for (int a = 0; a <= 8; ++a) {
    for (int b = 0; b <= 8; ++b) {
      const double flipped = analytic::poisson_binary_rule_risk([&](int x, int y) {
        if (x == a && y == b) return base_rule(x, y) == 1 ? 2 : 1;
        return base_rule(x, y);
      });
      CHECK(flipped > base);
    }
  }
}

TEST_CASE("degenerate posterior raises with the offending features") {
  // Two pmf sensors with disjoint supports across classes: the joint (0, 1)
  // observation has zero likelihood under every h.
  const ObjectSpace pts = ObjectSpace::points({0.0, 1.0});
  Eigen::MatrixXd pmf(2, 2);
  pmf << 1.0, 0.0, 0.0, 1.0;  // class 0 emits 0, class 1 emits 1
  const auto scenario = std::make_shared<Scenario>(
      pts, Prior::discrete(pts, {0.5, 0.5}),
      std::vector<std::shared_ptr<const Sensor>>{
          std::make_shared<DiscreteSensor>(std::vector<double>{0.0, 1.0},
                                           std::vector<double>{0.0, 1.0}, pmf),
          std::make_shared<DiscreteSensor>(std::vector<double>{0.0, 1.0},
                                           std::vector<double>{0.0, 1.0}, pmf)},
      DecisionSpace::points({0.0, 1.0}), CostFunction::squared_error());
  const double bad[2] = {0.0, 1.0};
  CHECK_THROWS_AS((void)posterior_mean(*scenario, bad), DegeneracyError);
  try {
    (void)posterior_mean(*scenario, bad);
  } catch (const DegeneracyError& e) {
    REQUIRE(e.features().size() == 2);
    CHECK(e.features()[0] == 0.0);
    CHECK(e.features()[1] == 1.0);
  }
  const double good[2] = {1.0, 1.0};
  CHECK(posterior_mean(*scenario, good) == 1.0);
}

TEST_CASE("feature-space violations are input errors") {
  const auto scenario = builtin_scenario("builtin:expo:M=2");
  const double neg[2] = {-1.0, 1.0};
  CHECK_THROWS_AS((void)posterior_mean(*scenario, neg), InputError);
  const auto poisson = builtin_scenario("builtin:poisson-binary");
  const double frac[2] = {1.5, 0.0};
  CHECK_THROWS_AS((void)posterior_mean(*poisson, frac), InputError);
  const double wrong_len[1] = {1.0};
  CHECK_THROWS_AS((void)posterior_mean(*poisson, wrong_len), InputError);
}

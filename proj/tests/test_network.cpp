#include <doctest.h>

#include <cmath>

#include "bayesfuse/analytic.hpp"
#include "bayesfuse/builtin.hpp"
#include "bayesfuse/errors.hpp"
#include "bayesfuse/montecarlo.hpp"
#include "bayesfuse/network.hpp"

using namespace bayesfuse;
namespace an = bayesfuse::analytic;

namespace {

std::shared_ptr<const Scenario> builtin_scenario(const std::string& ref) {
  return resolve_scenario_ref(ref).scenario;
}

const double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_CASE("centralized topology returns the plain rule") {
  const auto scenario = builtin_scenario("builtin:gauss:u=1,v=1,M=2");
  const auto rule = net::build_pbpo(scenario, net::FusionTopology::centralized());
  const double a[2] = {0.5, 1.5};
  CHECK(rule->fuse(a) == FusionRule(scenario).fuse(a));
  CHECK(net::stage2_scenario(*rule) == nullptr);
}

TEST_CASE("gaussian two-stage composition equals the centralized rule") {
  for (int M : {2, 10}) {
    const auto scenario =
        builtin_scenario("builtin:gauss:u=1,v=1,M=" + std::to_string(M));
    const FusionRule centralized(scenario);
    std::vector<int> first, second;
    for (int m = 0; m < scenario->sensor_count(); ++m) (m == 0 ? first : second).push_back(m);
    const auto composed = net::build_pbpo(
        scenario, net::FusionTopology::pbpo({first, second}, DecisionSpace::interval(-kInf, kInf)));

    const auto batch = mc::draw_batch(*scenario, 10000, ProposalMode::Prior, 211);
    double max_err = 0.0;
    for (std::size_t l = 0; l < batch.size(); ++l) {
      max_err = std::max(max_err,
                         std::abs(composed->fuse(batch.row(l)) - centralized.fuse(batch.row(l))));
    }
    CHECK(max_err < 1e-12);

    // The derived stage-2 sensors carry the analytic slope and variance.
    const auto derived = net::stage2_scenario(*composed);
    REQUIRE(derived);
    REQUIRE(derived->sensor_count() == 2);
    const auto* g = dynamic_cast<const GaussianSensor*>(&derived->sensor(0));
    REQUIRE(g);
    const double n = M / 2.0;
    CHECK(g->mean_slope() == doctest::Approx(n / (n + 1.0)).epsilon(1e-14));
    CHECK(g->spherical_variance() == doctest::Approx(n / ((n + 1.0) * (n + 1.0))).epsilon(1e-14));
  }
}

TEST_CASE("analytic composed risk equals the centralized one") {
  for (int M : {2, 10, 100}) {
    const an::GaussParams p{1.0, 1.0, M};
    const an::PbpoGauss sys = an::pbpo_gauss(p);
    const double beta = sys.system_coeff * sys.local_coeff;
    CHECK(std::abs(an::gauss_linear_rule_risk(p, beta) - 1.0 / (M + 1.0)) < 1e-12);
    CHECK(std::abs(sys.risk - 1.0 / (M + 1.0)) < 1e-15);
  }
}

TEST_CASE("four-class with a covering continuous inner space is a pass-through") {
  const auto loaded = resolve_scenario_ref("builtin:fourclass-soft");
  const auto scenario = loaded.scenario;
  const FusionRule centralized(scenario);
  const auto composed = net::build_pbpo(
      scenario, net::FusionTopology::pbpo({{0}, {1}}, DecisionSpace::interval(-kInf, kInf)));
  const auto batch = mc::draw_batch(*scenario, 20000, ProposalMode::Prior, 223);
  for (std::size_t l = 0; l < batch.size(); ++l) {
    REQUIRE(composed->fuse(batch.row(l)) == centralized.fuse(batch.row(l)));
  }
  // Identical rules, identical risk on any batch.
  const auto r1 = mc::estimate_risk(*composed, batch, scenario->cost(), 0.95);
  const auto r2 = mc::estimate_risk(centralized, batch, scenario->cost(), 0.95);
  CHECK(r1.estimate == r2.estimate);
}

TEST_CASE("four-class quantized composition reproduces the tabulated stage-2 pmf") {
  const auto loaded = resolve_scenario_ref("builtin:fourclass-pbpo");
  REQUIRE(loaded.topology);
  const auto rule = net::build_pbpo(loaded.scenario, *loaded.topology);
  const auto derived = net::stage2_scenario(*rule);
  REQUIRE(derived);
  REQUIRE(derived->sensor_count() == 2);

  // Independent pmf oracle for sensor A: its stage-1 decision regions were
  // computed externally by root-finding the posterior-mean threshold
  // crossings, giving the boundaries below with decisions {2,1,2,3,2}.
  const auto* sensor_a = dynamic_cast<const DiscreteSensor*>(&derived->sensor(0));
  REQUIRE(sensor_a);
  const auto Phi = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
  const double edges[4] = {-5.066200321443, 1.698009196195, 2.912564780735, 4.502095302820};
  const int decs[5] = {2, 1, 2, 3, 2};
  const double mu[4] = {0.0, 1.0, 2.0, 3.0};
  const double sd[4] = {1.7, 0.4, 3.0, 1.0};
  for (int i = 0; i < 4; ++i) {
    double expect[4] = {0.0, 0.0, 0.0, 0.0};
    double prev = 0.0;
    for (int r = 0; r < 5; ++r) {
      const double next = r < 4 ? Phi((edges[r] - mu[i]) / sd[i]) : 1.0;
      expect[decs[r]] += next - prev;
      prev = next;
    }
    for (int k = 0; k < 4; ++k) {
      CHECK(sensor_a->pmf()(i, k) == doctest::Approx(expect[k]).epsilon(1e-8));
    }
  }

  // Monte Carlo risk against the reference value, small-sample version.
  const auto batch = mc::draw_batch(*loaded.scenario, 200000, ProposalMode::Prior, 227);
  const auto est = mc::estimate_risk(*rule, batch, loaded.scenario->cost(), 0.95);
  CHECK(std::abs(est.estimate - 0.57862) < 0.01);
}

TEST_CASE("information loss: quantized stage one cannot beat centralized fusion") {
  const auto soft = resolve_scenario_ref("builtin:fourclass-soft");
  const auto pbpo = resolve_scenario_ref("builtin:fourclass-pbpo");
  const FusionRule centralized(soft.scenario);
  const auto composed = net::build_pbpo(pbpo.scenario, *pbpo.topology);
  const auto batch_soft = mc::draw_batch(*soft.scenario, 300000, ProposalMode::Prior, 229);
  const auto batch_pbpo = mc::draw_batch(*pbpo.scenario, 300000, ProposalMode::Prior, 233);
  const auto soft_est = mc::estimate_risk(centralized, batch_soft, soft.scenario->cost(), 0.99);
  const auto pbpo_est = mc::estimate_risk(*composed, batch_pbpo, pbpo.scenario->cost(), 0.99);
  CHECK(soft_est.ci_high() < pbpo_est.ci_low());
}

TEST_CASE("unsupported compositions are rejected with a named gap") {
  SUBCASE("discrete inner space over a continuous object space") {
    const auto mixture = builtin_scenario("builtin:mixture");
    CHECK_THROWS_AS(net::build_pbpo(mixture, net::FusionTopology::pbpo(
                                                 {{0}, {1}}, DecisionSpace::points({0.0, 1.0}))),
                    UnsupportedConfigError);
  }
  SUBCASE("discrete inner space over a non-gaussian sensor") {
    const auto poisson = builtin_scenario("builtin:poisson-binary");
    CHECK_THROWS_AS(net::build_pbpo(poisson, net::FusionTopology::pbpo(
                                                 {{0}, {1}}, DecisionSpace::points({1.0, 2.0}))),
                    UnsupportedConfigError);
  }
  SUBCASE("bounded continuous inner space cannot pass a real-line feature through") {
    const auto fourclass = builtin_scenario("builtin:fourclass-soft");
    CHECK_THROWS_AS(net::build_pbpo(fourclass, net::FusionTopology::pbpo(
                                                   {{0}, {1}}, DecisionSpace::interval(0.0, 3.0))),
                    UnsupportedConfigError);
  }
  SUBCASE("multi-sensor non-gaussian group with a continuous inner space") {
    const auto expo = builtin_scenario("builtin:expo:M=2");
    CHECK_THROWS_AS(net::build_pbpo(expo, net::FusionTopology::pbpo(
                                              {{0, 1}}, DecisionSpace::interval(-kInf, kInf))),
                    UnsupportedConfigError);
  }
  SUBCASE("groups must partition the sensors") {
    const auto gauss = builtin_scenario("builtin:gauss:u=1,v=1,M=2");
    CHECK_THROWS_AS(net::build_pbpo(gauss, net::FusionTopology::pbpo(
                                               {{0}}, DecisionSpace::interval(-kInf, kInf))),
                    InputError);
    CHECK_THROWS_AS(net::build_pbpo(gauss, net::FusionTopology::pbpo(
                                               {{0, 0}, {1}}, DecisionSpace::interval(-kInf, kInf))),
                    InputError);
  }
}

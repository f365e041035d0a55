#include <doctest.h>

#include "bayesfuse/cost.hpp"
#include "bayesfuse/errors.hpp"
#include "bayesfuse/fusion.hpp"
#include "bayesfuse/spaces.hpp"

using namespace bayesfuse;

TEST_CASE("object space invariants") {
  CHECK_THROWS_AS(ObjectSpace::points({}), InputError);
  CHECK_THROWS_AS(ObjectSpace::points({1.0, 1.0}), InputError);
  CHECK_THROWS_AS(ObjectSpace::points({2.0, 1.0}), InputError);
  CHECK_THROWS_AS(ObjectSpace::interval(1.0, 1.0), InputError);

  const ObjectSpace pts = ObjectSpace::points({0.0, 1.0, 2.5});
  CHECK(pts.contains(2.5));
  CHECK_FALSE(pts.contains(2.0));
  const double inf = std::numeric_limits<double>::infinity();
  const ObjectSpace line = ObjectSpace::interval(-inf, inf);
  CHECK(line.contains(1e300));
  CHECK_FALSE(line.bounded());
}

TEST_CASE("feature space membership") {
  const FeatureSpace counts = FeatureSpace::counts(2);
  const double ok[2] = {3.0, 0.0};
  const double frac[2] = {1.5, 0.0};
  const double neg[2] = {-1.0, 0.0};
  CHECK(counts.contains(ok));
  CHECK_FALSE(counts.contains(frac));
  CHECK_FALSE(counts.contains(neg));

  const FeatureSpace half = FeatureSpace::half_line(1);
  const double x[1] = {0.0};
  CHECK(half.contains(x));
}

TEST_CASE("quantize: nearest point, ties toward the smaller") {
  const DecisionSpace k4 = DecisionSpace::points({0.0, 1.0, 2.0, 3.0});
  CHECK(quantize(k4, 1.6) == 2.0);
  CHECK(quantize(DecisionSpace::points({0.0, 1.0}), 0.5) == 0.0);  // tie-break
  CHECK(quantize(k4, -7.0) == 0.0);
  CHECK(quantize(k4, 9.0) == 3.0);
  CHECK(quantize(DecisionSpace::interval(0.0, 3.0), 3.7) == 3.0);
  CHECK(quantize(DecisionSpace::interval(0.0, 3.0), 1.234) == 1.234);
}

TEST_CASE("quantize on interval unions") {
  const DecisionSpace u =
      DecisionSpace::interval_union({Interval{0.0, 1.0}, Interval{2.0, 3.0}});
  CHECK(quantize(u, 0.4) == 0.4);
  CHECK(quantize(u, 1.2) == 1.0);
  CHECK(quantize(u, 1.9) == 2.0);
  CHECK(quantize(u, 1.5) == 1.0);  // midpoint tie goes to the smaller part
  CHECK(quantize(u, 5.0) == 3.0);
  CHECK_THROWS_AS(
      DecisionSpace::interval_union({Interval{0.0, 2.0}, Interval{1.0, 3.0}}), InputError);
}

TEST_CASE("quantizer idempotence over random inputs") {
  const DecisionSpace spaces[] = {
      DecisionSpace::points({-1.0, 0.25, 2.0}),
      DecisionSpace::interval(-2.0, 5.0),
      DecisionSpace::interval_union({Interval{-3.0, -1.0}, Interval{0.0, 0.0}, Interval{2.0, 4.0}}),
  };
  RandomStream rng(42, 0);
  for (const DecisionSpace& k : spaces) {
    for (int i = 0; i < 2000; ++i) {
      const double x = rng.uniform_open(-10.0, 10.0);
      const double q = quantize(k, x);
      CHECK(k.contains(q));
      CHECK(quantize(k, q) == q);
    }
  }
}

TEST_CASE("cost forms") {
  const CostFunction quad = CostFunction::quadratic();
  CHECK(quad(2.0) == doctest::Approx(2.0));  // x^2/2
  CHECK(quad(-2.0) == quad(2.0));
  CHECK(quad(0.0) == 0.0);

  const CostFunction quartic = CostFunction::even_power(4);
  CHECK(quartic(2.0) == doctest::Approx(4.0));  // x^4/4
  CHECK_THROWS_AS(CostFunction::even_power(3), InputError);
  CHECK_THROWS_AS(CostFunction::even_power(0), InputError);

  const CostFunction sq = CostFunction::squared_error();
  CHECK(sq(3.0) == doctest::Approx(9.0));

  const CostFunction poly = CostFunction::even_polynomial({{2, 1.0}, {6, 0.5}});
  CHECK(poly(2.0) == doctest::Approx(4.0 + 0.5 * 64.0));
  CHECK_THROWS_AS(CostFunction::even_polynomial({{3, 1.0}}), InputError);
  CHECK_THROWS_AS(CostFunction::even_polynomial({{2, -1.0}}), InputError);

  const CostFunction zero = CostFunction::even_polynomial({});
  CHECK(zero(123.0) == 0.0);
}

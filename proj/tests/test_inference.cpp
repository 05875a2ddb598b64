#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "frailty/inference.hpp"

using namespace frailty;

TEST_CASE("normal quantile at standard points") {
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.9599639845400536).epsilon(5e-9));
  CHECK(normal_quantile(0.95) == doctest::Approx(1.6448536269514715).epsilon(5e-9));
  CHECK(normal_quantile(0.995) == doctest::Approx(2.5758293035488999).epsilon(5e-9));
  CHECK(normal_quantile(0.025) == doctest::Approx(-1.9599639845400538).epsilon(5e-9));
  CHECK_THROWS_AS(normal_quantile(0.0), std::invalid_argument);
  CHECK_THROWS_AS(normal_quantile(1.0), std::invalid_argument);
}

TEST_CASE("normal quantile symmetry and monotonicity") {
  double prev = -1e9;
  for (double p = 0.01; p < 0.995; p += 0.007) {
    const double z = normal_quantile(p);
    CHECK(z > prev);
    prev = z;
    CHECK(normal_quantile(1.0 - p) == doctest::Approx(-z).epsilon(1e-8));
  }
}

TEST_CASE("wald interval with frozen digits") {
  const ConfidenceInterval ci = ci_wald(0.427, 0.261, 0.95);
  CHECK(ci.lo == doctest::Approx(-0.08455059996495401).epsilon(1e-9));
  CHECK(ci.hi == doctest::Approx(0.93855059996495394).epsilon(1e-9));
  // symmetric around the estimate
  CHECK(0.5 * (ci.lo + ci.hi) == doctest::Approx(0.427).epsilon(1e-12));
}

TEST_CASE("log-scale interval with frozen digits") {
  const ConfidenceInterval ci = ci_log_scale(0.427, 0.261, 0.95);
  CHECK(ci.lo == doctest::Approx(0.12886601748582602).epsilon(1e-9));
  CHECK(ci.hi == doctest::Approx(1.4148726216363006).epsilon(1e-9));
  // positive by construction, asymmetric around the estimate, geometric center
  CHECK(ci.lo > 0.0);
  CHECK(std::sqrt(ci.lo * ci.hi) == doctest::Approx(0.427).epsilon(1e-10));
}

TEST_CASE("log-scale interval always stays positive where wald goes negative") {
  for (double se : {0.2, 0.5, 1.0, 3.0}) {
    const ConfidenceInterval w = ci_wald(0.3, se, 0.95);
    const ConfidenceInterval l = ci_log_scale(0.3, se, 0.95);
    CHECK(l.lo > 0.0);
    if (se >= 0.2) CHECK(w.lo < 0.0);  // wald dips below zero for these
    CHECK(l.hi > l.lo);
  }
}

TEST_CASE("coverage uses closed endpoints") {
  const ConfidenceInterval ci{1.0, 2.0};
  CHECK(ci.covers(1.0));
  CHECK(ci.covers(2.0));
  CHECK(ci.covers(1.5));
  CHECK_FALSE(ci.covers(0.999999));
  CHECK_FALSE(ci.covers(2.000001));
}

TEST_CASE("degenerate se collapses both intervals to the estimate") {
  const ConfidenceInterval w = ci_wald(0.7, 0.0, 0.95);
  CHECK(w.lo == 0.7);
  CHECK(w.hi == 0.7);
  const ConfidenceInterval l = ci_log_scale(0.7, 0.0, 0.95);
  CHECK(l.lo == doctest::Approx(0.7));
  CHECK(l.hi == doctest::Approx(0.7));
}

TEST_CASE("level widens intervals monotonically") {
  double prev_width = 0.0;
  for (double level : {0.5, 0.8, 0.9, 0.95, 0.99}) {
    const ConfidenceInterval ci = ci_wald(1.0, 0.5, level);
    const double width = ci.hi - ci.lo;
    CHECK(width > prev_width);
    prev_width = width;
  }
}

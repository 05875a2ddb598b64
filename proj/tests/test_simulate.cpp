#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "frailty/simulate.hpp"

using namespace frailty;

namespace {

SimulationScenario base_scenario() {
  SimulationScenario s;
  s.name = "sim-test";
  s.n_clusters = 20;
  s.cluster_size = 10;
  s.alpha = 1.7;
  s.lambda = 0.2;
  s.beta = {0.5, -0.3};
  s.theta = 0.6;
  s.censoring = 0.0;
  s.seed = 11;
  return s;
}

// One-sample Kolmogorov-Smirnov distance against U(0,1).
double ks_uniform(std::vector<double> u) {
  std::sort(u.begin(), u.end());
  const double n = static_cast<double>(u.size());
  double d = 0.0;
  for (size_t i = 0; i < u.size(); ++i) {
    d = std::max(d, std::abs(u[i] - (i + 1) / n));
    d = std::max(d, std::abs(u[i] - i / n));
  }
  return d;
}

}  // namespace

TEST_CASE("theta = 0, unit weibull, no covariates gives unit exponential times") {
  SimulationScenario s;
  s.n_clusters = 500;
  s.cluster_size = 200;
  s.alpha = 1.0;
  s.lambda = 1.0;
  s.theta = 0.0;
  s.censoring = 0.0;
  s.seed = 5;
  const auto sim = generate_replicate(s, 0.0, 5, 0, 0);
  REQUIRE(sim.data.n() == 100000);
  CHECK(sim.achieved_censoring == 0.0);
  double mean = 0.0;
  int over = 0;
  for (int i = 0; i < sim.data.n(); ++i) {
    CHECK(sim.data.status[i] == 1);
    REQUIRE(sim.data.time[i] > 0.0);
    mean += sim.data.time[i];
    if (sim.data.time[i] > 1.0) ++over;
  }
  mean /= sim.data.n();
  CHECK(mean == doctest::Approx(1.0).epsilon(0.02));
  CHECK(static_cast<double>(over) / sim.data.n() ==
        doctest::Approx(std::exp(-1.0)).epsilon(0.02));
  // no frailty: every cluster variate collapses to 1
  for (double z : sim.frailty) CHECK(z == 1.0);
}

TEST_CASE("the same (seed, scenario, replicate) triple regenerates identical data") {
  const auto s = base_scenario();
  const auto a = generate_replicate(s, 0.1, 42, 3, 17);
  const auto b = generate_replicate(s, 0.1, 42, 3, 17);
  REQUIRE(a.data.n() == b.data.n());
  for (int i = 0; i < a.data.n(); ++i) {
    CHECK(a.data.time[i] == b.data.time[i]);
    CHECK(a.data.status[i] == b.data.status[i]);
  }
  CHECK(a.data.x == b.data.x);
  CHECK(a.frailty == b.frailty);

  // and any coordinate change in the triple moves the stream
  for (const auto& other : {generate_replicate(s, 0.1, 42, 3, 18),
                            generate_replicate(s, 0.1, 42, 4, 17),
                            generate_replicate(s, 0.1, 43, 3, 17)}) {
    bool differs = false;
    for (int i = 0; i < a.data.n() && !differs; ++i)
      differs = a.data.time[i] != other.data.time[i];
    CHECK(differs);
  }
}

TEST_CASE("generate() is calibrate + replicate zero under the scenario seed") {
  auto s = base_scenario();
  s.censoring = 0.3;
  const auto a = generate(s);
  const auto b = generate_replicate(s, calibrate_censoring(s), s.seed, 0, 0);
  CHECK(a.censoring_rate == b.censoring_rate);
  CHECK(a.data.time == b.data.time);
  CHECK(a.data.status == b.data.status);
}

TEST_CASE("achieved censoring is the exact censored fraction of the sample") {
  auto s = base_scenario();
  s.censoring = 0.4;
  const auto sim = generate(s);
  int censored = 0;
  for (int v : sim.data.status) censored += 1 - v;
  CHECK(sim.achieved_censoring == static_cast<double>(censored) / sim.data.n());
  CHECK(censored > 0);
}

TEST_CASE("censoring calibration hits the target on fresh replicates") {
  auto s = base_scenario();
  s.censoring = 0.5;
  const double rate = calibrate_censoring(s);
  REQUIRE(rate > 0.0);
  double acc = 0.0;
  const int reps = 10;
  for (int r = 0; r < reps; ++r) acc += generate_replicate(s, rate, 999, 0, r).achieved_censoring;
  CHECK(acc / reps == doctest::Approx(0.5).epsilon(0.05));

  // the rate is monotone in the target, and zero target means no censoring
  auto s2 = s;
  s2.censoring = 0.2;
  auto s8 = s;
  s8.censoring = 0.8;
  CHECK(calibrate_censoring(s2) < rate);
  CHECK(rate < calibrate_censoring(s8));
  s2.censoring = 0.0;
  CHECK(calibrate_censoring(s2) == 0.0);
}

TEST_CASE("frailty draws have gamma(1/theta, theta) moments") {
  SimulationScenario s;
  s.n_clusters = 4000;
  s.cluster_size = 1;
  s.alpha = 1.0;
  s.lambda = 1.0;
  s.theta = 0.8;
  s.seed = 21;
  const auto sim = generate_replicate(s, 0.0, 21, 0, 0);
  const auto& z = sim.frailty;
  const double mean = std::accumulate(z.begin(), z.end(), 0.0) / z.size();
  double var = 0.0;
  for (double v : z) var += (v - mean) * (v - mean);
  var /= (z.size() - 1);
  CHECK(mean == doctest::Approx(1.0).epsilon(0.06));
  CHECK(var == doctest::Approx(0.8).epsilon(0.2));
}

TEST_CASE("conditional inverse transform is exact under both couplings") {
  for (auto coupling : {FrailtyCoupling::multiplicative, FrailtyCoupling::additive_log}) {
    auto s = base_scenario();
    s.coupling = coupling;
    s.n_clusters = 200;
    s.cluster_size = 25;
    const auto sim = generate_replicate(s, 0.0, 31, 0, 0);
    const auto& d = sim.data;
    // Invert the conditional survival function: given the cluster variate,
    // S(t | z, x) evaluated at the drawn time must be uniform.
    std::vector<double> u(d.n());
    for (int i = 0; i < d.n(); ++i) {
      const double z = sim.frailty[d.cluster[i]];
      const double factor = coupling == FrailtyCoupling::multiplicative ? z : std::exp(z);
      const double eta = d.x.row(i)[0] * 0.5 + d.x.row(i)[1] * -0.3;
      u[i] = std::exp(-s.lambda * factor * std::pow(d.time[i], s.alpha) * std::exp(eta));
    }
    const double dks = ks_uniform(u);
    CHECK(dks * std::sqrt(static_cast<double>(d.n())) < 2.0);
  }
}

TEST_CASE("couplings share the stream: times differ exactly by (z / e^z)^(1/alpha)") {
  auto sm = base_scenario();
  auto sa = base_scenario();
  sa.coupling = FrailtyCoupling::additive_log;
  const auto m = generate_replicate(sm, 0.0, 7, 0, 0);
  const auto a = generate_replicate(sa, 0.0, 7, 0, 0);
  REQUIRE(m.frailty == a.frailty);
  CHECK(m.data.x == a.data.x);
  for (int i = 0; i < m.data.n(); ++i) {
    const double z = m.frailty[m.data.cluster[i]];
    const double want = m.data.time[i] * std::pow(z / std::exp(z), 1.0 / sm.alpha);
    CHECK(a.data.time[i] == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("scenario json round-trips every field") {
  auto s = base_scenario();
  s.coupling = FrailtyCoupling::additive_log;
  s.censoring = 0.25;
  s.seed = 42;
  const std::string text = scenario_to_json(s);
  CHECK(text.find("\"frailty_coupling\": \"additive_log\"") != std::string::npos);
  const auto r = scenario_from_json_text(text);
  CHECK(r.name == s.name);
  CHECK(r.n_clusters == s.n_clusters);
  CHECK(r.cluster_size == s.cluster_size);
  CHECK(r.alpha == s.alpha);
  CHECK(r.lambda == s.lambda);
  CHECK(r.beta == s.beta);
  CHECK(r.theta == s.theta);
  CHECK(r.censoring == s.censoring);
  CHECK(r.coupling == s.coupling);
  CHECK(r.seed == s.seed);
}

TEST_CASE("scenario json defaults and rejections") {
  const char* minimal = R"({"g": 4, "cluster_size": 3, "alpha": 1.0, "lambda": 1.0,
                            "beta": [], "theta": 0.5, "censoring": 0.0})";
  const auto s = scenario_from_json_text(minimal);
  CHECK(s.coupling == FrailtyCoupling::multiplicative);  // default when absent
  CHECK(s.seed == 1);
  CHECK(s.name.empty());

  CHECK_THROWS_WITH_AS(
      scenario_from_json_text(R"({"g": 4, "cluster_size": 3, "alpha": 1.0, "lambda": 1.0,
                                  "beta": [], "theta": 0.5, "censoring": 0.0,
                                  "frailty_coupling": "bogus"})"),
      "scenario: frailty_coupling must be 'multiplicative' or 'additive_log', got 'bogus'",
      std::invalid_argument);
  CHECK_THROWS_AS(scenario_from_json_text("{"), std::invalid_argument);
  CHECK_THROWS_AS(scenario_from_json_text("{}"), std::invalid_argument);
  CHECK_THROWS_AS(scenario_from_json_file("/no/such/scenario.json"), std::invalid_argument);
}

TEST_CASE("scenario validation") {
  auto ok = base_scenario();
  CHECK_NOTHROW(ok.validate());

  auto s = ok;
  s.n_clusters = 1;
  CHECK_THROWS_WITH_AS(s.validate(), "scenario: need at least 2 clusters", std::invalid_argument);
  s = ok;
  s.cluster_size = 0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = ok;
  s.alpha = 0.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = ok;
  s.theta = -0.1;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = ok;
  s.censoring = 1.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("bundled scenario files parse and validate") {
  const std::vector<std::string> names = {
      "g10x10_c20", "g10x10_c50", "g10x10_c80", "g10x40_c20", "g10x40_c50",
      "g10x40_c80", "g10x80_c20", "g10x80_c50", "g10x80_c80", "g40x10_c20",
      "g40x10_c50", "g40x10_c80", "g80x10_c20", "g80x10_c50", "g80x10_c80"};
  for (const auto& name : names) {
    const auto s = scenario_from_json_file(std::string(FRAILTY_SCENARIO_DIR) + "/" + name + ".json");
    CHECK(s.name == name);
    CHECK(s.alpha == 3.0);
    CHECK(s.lambda == 0.007);
    CHECK(s.beta == std::vector<double>{1.0, -1.0, 0.5});
    CHECK(s.theta == 0.5);
    CHECK(s.coupling == FrailtyCoupling::additive_log);
    CHECK(s.n() == s.n_clusters * s.cluster_size);
  }
}

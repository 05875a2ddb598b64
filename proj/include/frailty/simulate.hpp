#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "frailty/data.hpp"

namespace frailty {

// How the drawn gamma variate z enters the conditional hazard.
// multiplicative: hazard is z * exp(x'beta) * h0(t) -- the model the fitters
//   assume, so fits are correctly specified.
// additive_log: hazard is exp(x'beta + z) * h0(t) -- z lands on the log
//   scale, so the fitted gamma-frailty model is deliberately misspecified.
//   Useful for studying estimator behaviour under that kind of mismatch.
enum class FrailtyCoupling { multiplicative, additive_log };

// One simulation design cell: g clusters of fixed size, Weibull baseline,
// gamma frailty with variance theta, exponential censoring tuned to a target
// censored fraction.  Covariate laws cycle with the column index:
// U(0,1), N(0,1), Bernoulli(0.25).
struct SimulationScenario {
  std::string name;
  int n_clusters = 0;
  int cluster_size = 0;
  double alpha = 1.0;
  double lambda = 1.0;
  std::vector<double> beta;
  double theta = 0.0;        // >= 0; zero means no frailty
  double censoring = 0.0;    // target censored fraction in [0,1)
  FrailtyCoupling coupling = FrailtyCoupling::multiplicative;
  std::uint64_t seed = 1;

  int n() const { return n_clusters * cluster_size; }
  void validate() const;  // throws std::invalid_argument
};

SimulationScenario scenario_from_json_file(const std::string& path);
SimulationScenario scenario_from_json_text(const std::string& text);
std::string scenario_to_json(const SimulationScenario& s);

struct SimulatedData {
  ClusteredSurvivalData data;
  std::vector<double> frailty;      // the z_i actually drawn
  double censoring_rate = 0.0;      // exponential rate used
  double achieved_censoring = 0.0;  // censored fraction in this dataset
};

// Exponential censoring rate hitting the scenario's target fraction: the
// marginal event-time sample is drawn once with a fixed internal seed, then
// the rate is bisected on mean(1 - exp(-rate * t)).  Returns 0 when the
// target is 0.
double calibrate_censoring(const SimulationScenario& s);

// Replicate streams are keyed by (seed, scenario_index, replicate); the same
// triple always regenerates the identical dataset.
SimulatedData generate_replicate(const SimulationScenario& s, double censoring_rate,
                                 std::uint64_t seed, std::uint64_t scenario_index,
                                 std::uint64_t replicate);

// Standalone convenience: calibrates, then draws replicate 0 of scenario 0
// under the scenario's own seed.
SimulatedData generate(const SimulationScenario& s);

}  // namespace frailty

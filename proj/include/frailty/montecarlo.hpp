#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "frailty/estimators.hpp"
#include "frailty/simulate.hpp"

namespace frailty {

struct ReplicateEstimate {
  bool converged = false;
  bool theta_boundary = false;
  Eigen::VectorXd beta;
  Eigen::VectorXd se_beta;
  double theta = 0.0;
  double se_theta = 0.0;
  double loglik = 0.0;
  double seconds = 0.0;
  double achieved_censoring = 0.0;
  int iterations = 0;
};

struct ParamSummary {
  double truth = 0.0;
  double mean = 0.0;
  double bias = 0.0;
  double mean_se = 0.0;   // over finite reported SEs
  double emp_se = 0.0;    // sample SD with n-1 denominator
  double median = 0.0;
  double median_se = 0.0;
  double mse = 0.0;       // mean squared error against the truth
  double rmse = 0.0;
  int n = 0;              // converged estimates contributing
  int n_se = 0;           // of those, finite SE
};

struct CoverageSummary {
  double rate = 0.0;  // percent
  int n = 0;          // converged fits with a usable interval
};

struct MethodSummary {
  int n_total = 0;
  int n_converged = 0;
  double convergence_rate = 0.0;  // percent
  std::vector<ParamSummary> beta;
  ParamSummary theta;
  std::vector<CoverageSummary> beta_cover;   // Wald intervals
  CoverageSummary theta_cover_wald;
  CoverageSummary theta_cover_log;
  double mean_seconds = 0.0;
};

struct ScenarioStudy {
  SimulationScenario scenario;
  double censoring_rate = 0.0;
  double mean_achieved_censoring = 0.0;
  std::vector<std::pair<Method, MethodSummary>> methods;
  // Raw per-replicate estimates, [method][replicate]; kept for downstream
  // analyses and the estimate dump.
  std::vector<std::vector<ReplicateEstimate>> raw;
};

struct StudyReport {
  std::uint64_t seed = 0;
  int reps = 0;
  double level = 0.95;
  std::vector<Method> methods;
  std::vector<ScenarioStudy> scenarios;
};

// Aggregates one method's replicate estimates over the converged subset.
MethodSummary aggregate(const std::vector<ReplicateEstimate>& records,
                        const std::vector<double>& beta_truth, double theta_truth, double level);

// Full factorial study: every scenario x method x replicate.  Replicates are
// independent (parallelized when OpenMP is available); aggregation is serial
// and in replicate order, so results do not depend on the thread count.
StudyReport run_grid(const std::vector<SimulationScenario>& scenarios,
                     const std::vector<Method>& methods, int reps, double level,
                     std::uint64_t seed, int threads = 0,
                     const std::function<void(const std::string&)>& progress = {});

// Deterministic study summary (timings deliberately excluded).
std::string report_json(const StudyReport& r);
// Wall-time sidecar; machine-dependent by nature.
std::string timing_json(const StudyReport& r);
// Fixed-width summary tables.
std::string report_text(const StudyReport& r);
// Raw per-replicate estimates as CSV.
std::string estimates_csv(const StudyReport& r);

}  // namespace frailty

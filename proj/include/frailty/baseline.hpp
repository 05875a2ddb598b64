#pragma once

#include <Eigen/Dense>
#include <vector>

#include "frailty/risk_set.hpp"

namespace frailty {

// Right-continuous step cumulative hazard: H0(t) = sum of jumps at times <= t.
struct StepCumulativeHazard {
  std::vector<double> times;  // ascending
  std::vector<double> jumps;  // > 0, aligned with times
  std::vector<double> cum;    // prefix sums of jumps

  double operator()(double t) const;
  void rebuild_cum();
};

// Breslow estimator with per-subject linear predictor eta = x'beta + offset.
// Jump at the v-th distinct event time is d_v / sum_{risk set} exp(eta).
StepCumulativeHazard breslow(const ClusteredSurvivalData& data, const RiskSetIndex& idx,
                             const Eigen::VectorXd& beta, const std::vector<double>& offset);

// Per-cluster accumulated hazard H_i = sum_j H0(y_ij) exp(x_ij'beta); the
// frailty offset is deliberately not part of it.
std::vector<double> cluster_hazard(const ClusteredSurvivalData& data,
                                   const StepCumulativeHazard& h0, const Eigen::VectorXd& beta);

}  // namespace frailty

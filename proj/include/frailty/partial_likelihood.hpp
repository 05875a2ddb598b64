#pragma once

#include <Eigen/Dense>
#include <vector>

#include "frailty/risk_set.hpp"

namespace frailty {

struct PartialLikelihoodValue {
  double loglik = 0.0;
  Eigen::VectorXd grad;   // d loglik / d beta
  Eigen::MatrixXd info;   // minus the Hessian (observed information)
};

// Cox partial log-likelihood with Breslow tie handling and fixed per-subject
// offsets.  `order` selects how much to compute: 0 value, 1 +gradient,
// 2 +information.  Single O(n + r) sweep with p-dimensional accumulators.
PartialLikelihoodValue partial_loglik(const ClusteredSurvivalData& data, const RiskSetIndex& idx,
                                      const Eigen::VectorXd& beta,
                                      const std::vector<double>& offset, int order);

struct NewtonResult {
  Eigen::VectorXd beta;
  double loglik = 0.0;
  Eigen::MatrixXd info;   // information at the optimum
  int iterations = 0;
  bool converged = false;
};

// Newton-Raphson with step halving.  Starts at beta0; offsets are held fixed.
NewtonResult newton_partial_likelihood(const ClusteredSurvivalData& data, const RiskSetIndex& idx,
                                       const std::vector<double>& offset,
                                       const Eigen::VectorXd& beta0, int max_iter = 50,
                                       double grad_tol = 1e-9);

}  // namespace frailty

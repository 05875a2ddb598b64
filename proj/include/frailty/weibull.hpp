#pragma once

#include <Eigen/Dense>

#include "frailty/data.hpp"

namespace frailty {

// Weibull baseline h0(t) = lambda * alpha * t^(alpha-1), H0(t) = lambda * t^alpha.
struct WeibullBaseline {
  double alpha = 1.0;
  double lambda = 1.0;

  double cumulative(double t) const;
  double log_hazard(double t) const;
};

struct WeibullFit {
  WeibullBaseline baseline;
  Eigen::VectorXd beta;
  double loglik = 0.0;
  bool converged = false;
};

// No-frailty Weibull proportional hazards regression, fitted by BFGS on
// (log alpha, log lambda, beta).  Used to seed the frailty fit.
WeibullFit fit_weibull_no_frailty(const ClusteredSurvivalData& data);

// Gamma-frailty marginal log-likelihood under the Weibull baseline:
//   sum_ij d_ij [log h0(y_ij) + x'beta] + sum_i log[(-1)^{d_i} L^{(d_i)}(H_i)].
// theta = 0 is the independence limit.  Returns -inf when numerically invalid.
double weibull_marginal_loglik(const ClusteredSurvivalData& data, double alpha, double lambda,
                               const Eigen::VectorXd& beta, double theta);

}  // namespace frailty

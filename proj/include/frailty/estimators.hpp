#pragma once

#include <Eigen/Dense>
#include <string>
#include <variant>
#include <vector>

#include "frailty/baseline.hpp"
#include "frailty/data.hpp"
#include "frailty/partial_likelihood.hpp"
#include "frailty/weibull.hpp"

namespace frailty {

enum class Method { em, ppl, mml, pfl };

const char* method_name(Method m);
// Accepts em / ppl / mml / pfl and the alias hl (-> ppl).  Throws on others.
Method parse_method(const std::string& name);

struct FitConfig {
  int max_outer_iters = 200;
  int max_inner_iters = 50;
  double tol_loglik = 1e-8;    // relative marginal log-likelihood change
  double tol_param = 1e-6;     // sup-norm parameter change
  double theta_init = 1.0;
  double theta_min = 1e-6;
  double theta_max = 100.0;
  double beta_ceiling = 20.0;  // divergence guard on |beta|_inf
};

struct FrailtyFit {
  Method method = Method::em;
  Eigen::VectorXd beta;
  Eigen::VectorXd se_beta;
  double theta = 0.0;
  double se_theta = 0.0;
  std::variant<StepCumulativeHazard, WeibullBaseline> baseline;
  std::vector<double> frailty;       // posterior frailty mean per cluster
  double loglik = 0.0;               // marginal log-likelihood at the estimate
  std::vector<double> loglik_trace;  // per outer iteration / evaluation
  int iterations = 0;
  bool converged = false;
  bool theta_boundary = false;
  std::string message;
};

// Gamma-frailty EM: posterior expectations, offset Cox step, Breslow update,
// one-dimensional variance step; monotone in the marginal log-likelihood.
FrailtyFit fit_em(const ClusteredSurvivalData& data, const FitConfig& cfg = {});

// Penalized partial likelihood: closed-form frailty updates alternated with
// Newton steps inside, profile search over theta outside.
FrailtyFit fit_ppl(const ClusteredSurvivalData& data, const FitConfig& cfg = {});

// Marginal maximum likelihood under a Weibull baseline, quasi-Newton on
// (log alpha, log lambda, beta, log theta).
FrailtyFit fit_mml(const ClusteredSurvivalData& data, const FitConfig& cfg = {});

// Pseudo full likelihood: closed-form baseline pass with posterior-mean
// weights alternated with (beta, theta) maximization at fixed baseline.
FrailtyFit fit_pfl(const ClusteredSurvivalData& data, const FitConfig& cfg = {});

FrailtyFit fit(Method method, const ClusteredSurvivalData& data, const FitConfig& cfg = {});

// --- shared pieces, exposed for testing -----------------------------------

// Marginal log-likelihood of the step-baseline gamma frailty model.
double step_marginal_loglik(const ClusteredSurvivalData& data, const RiskSetIndex& idx,
                            const StepCumulativeHazard& h0, const Eigen::VectorXd& beta,
                            double theta);

// Observed information for beta from the joint penalized problem over
// (beta, u), reduced to the beta block by a Schur complement.  Treating the
// fitted frailty terms as known data overstates the precision of beta; this
// charges beta for the information spent estimating them.
Eigen::MatrixXd beta_information_joint(const ClusteredSurvivalData& data, const RiskSetIndex& idx,
                                       const Eigen::VectorXd& beta, const std::vector<double>& u,
                                       double theta);

struct InnerSolve {
  Eigen::VectorXd beta;
  std::vector<double> u;  // log frailty per cluster
  StepCumulativeHazard h0;
  std::vector<double> H;  // accumulated hazard per cluster
  Eigen::MatrixXd info;   // partial-likelihood information at beta
  double marginal = 0.0;
  int sweeps = 0;
  bool ok = false;
};

// Joint (beta, u, h0) solve at fixed theta; the value is the profile of the
// marginal log-likelihood over everything but theta.
InnerSolve solve_at_theta(const ClusteredSurvivalData& data, const RiskSetIndex& idx, double theta,
                          Eigen::VectorXd beta0, std::vector<double> u0, const FitConfig& cfg,
                          double param_tol = 1e-8);

// Baseline pass for the pseudo full likelihood: sequential jumps with
// posterior-mean cluster weights.
StepCumulativeHazard pfl_baseline(const ClusteredSurvivalData& data, const RiskSetIndex& idx,
                                  const Eigen::VectorXd& beta, double theta);

// Plug-in objective for the pseudo full likelihood at fixed baseline, with
// analytic gradient in (beta, log theta).
double pfl_objective(const ClusteredSurvivalData& data, const RiskSetIndex& idx,
                     const StepCumulativeHazard& h0, const Eigen::VectorXd& beta, double theta,
                     Eigen::VectorXd* grad);

}  // namespace frailty

#include "frailty/weibull.hpp"

#include <cmath>
#include <limits>

#include "frailty/gamma_frailty.hpp"
#include "frailty/optim.hpp"

namespace frailty {

double WeibullBaseline::cumulative(double t) const {
  return lambda * std::pow(t, alpha);
}

double WeibullBaseline::log_hazard(double t) const {
  return std::log(lambda) + std::log(alpha) + (alpha - 1.0) * std::log(t);
}

double weibull_marginal_loglik(const ClusteredSurvivalData& data, double alpha, double lambda,
                               const Eigen::VectorXd& beta, double theta) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  if (!(alpha > 0.0) || !(lambda > 0.0) || theta < 0.0) return -kInf;
  const int n = data.n();
  const double log_alpha = std::log(alpha), log_lambda = std::log(lambda);

  std::vector<double> H(data.n_clusters, 0.0);
  double ll = 0.0;
  for (int i = 0; i < n; ++i) {
    const double log_t = std::log(data.time[i]);
    const double eta = data.x.row(i).dot(beta);
    H[data.cluster[i]] += std::exp(log_lambda + alpha * log_t + eta);
    if (data.status[i]) ll += log_lambda + log_alpha + (alpha - 1.0) * log_t + eta;
  }
  if (!std::isfinite(ll)) return -kInf;
  const auto d = data.cluster_events();
  for (int c = 0; c < data.n_clusters; ++c) {
    if (!std::isfinite(H[c]) || H[c] > 1e290) return -kInf;
    ll += cluster_marginal_loglik(theta, d[c], H[c]);
  }
  return std::isfinite(ll) ? ll : -kInf;
}

WeibullFit fit_weibull_no_frailty(const ClusteredSurvivalData& data) {
  const int p = data.p();
  // Crude moment start: unit shape, lambda matching the event rate.
  double total_time = 0.0;
  for (const double t : data.time) total_time += t;
  const double rate0 = std::max(1e-8, data.n_events() / std::max(total_time, 1e-300));

  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(p + 2);
  x0[0] = 0.0;  // log alpha
  x0[1] = std::log(rate0);

  auto objective = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd beta = v.segment(2, p);
    if (v[0] > 15.0 || v[0] < -15.0 || v[1] > 300.0 || v[1] < -300.0) {
      return -std::numeric_limits<double>::infinity();
    }
    return weibull_marginal_loglik(data, std::exp(v[0]), std::exp(v[1]), beta, 0.0);
  };
  auto fg = [&](const Eigen::VectorXd& v, Eigen::VectorXd& g) {
    const double f = objective(v);
    if (std::isfinite(f)) g = fd_gradient(objective, v);
    return f;
  };

  BfgsOptions opt;
  opt.grad_tol = 1e-7;
  const auto res = bfgs_maximize(fg, x0, opt);

  WeibullFit fit;
  fit.baseline = WeibullBaseline{std::exp(res.x[0]), std::exp(res.x[1])};
  fit.beta = res.x.segment(2, p);
  fit.loglik = res.fx;
  fit.converged = res.converged;
  return fit;
}

}  // namespace frailty

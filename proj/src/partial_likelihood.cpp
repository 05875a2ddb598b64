#include "frailty/partial_likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace frailty {

PartialLikelihoodValue partial_loglik(const ClusteredSurvivalData& data, const RiskSetIndex& idx,
                                      const Eigen::VectorXd& beta,
                                      const std::vector<double>& offset, int order) {
  const int n = data.n();
  const int p = data.p();
  const int r = idx.n_times();

  Eigen::VectorXd eta(n);
  for (int i = 0; i < n; ++i) eta[i] = data.x.row(i).dot(beta) + offset[i];
  // The likelihood is invariant to a constant shift in eta; shifting by the
  // max keeps exp() away from overflow without changing any derivative.
  const double shift = (n > 0) ? eta.maxCoeff() : 0.0;

  PartialLikelihoodValue out;
  out.grad = Eigen::VectorXd::Zero(p);
  out.info = Eigen::MatrixXd::Zero(p, p);

  double s0 = 0.0;
  Eigen::VectorXd s1 = Eigen::VectorXd::Zero(p);
  Eigen::MatrixXd s2 = Eigen::MatrixXd::Zero(p, p);
  int pos = n;

  for (int v = r - 1; v >= 0; --v) {
    while (pos > idx.first_at_risk[v]) {
      --pos;
      const int i = idx.order[pos];
      const double w = std::exp(eta[i] - shift);
      s0 += w;
      if (order >= 1) s1.noalias() += w * data.x.row(i).transpose();
      if (order >= 2) s2.noalias() += w * data.x.row(i).transpose() * data.x.row(i);
    }
    const int dv = idx.event_counts[v];
    for (int k = idx.death_offsets[v]; k < idx.death_offsets[v + 1]; ++k) {
      const int i = idx.death_subjects[k];
      out.loglik += eta[i] - shift;
      if (order >= 1) out.grad += data.x.row(i).transpose();
    }
    out.loglik -= dv * std::log(s0);
    if (order >= 1) {
      const Eigen::VectorXd xbar = s1 / s0;
      out.grad.noalias() -= dv * xbar;
      if (order >= 2) out.info.noalias() += dv * (s2 / s0 - xbar * xbar.transpose());
    }
  }
  return out;
}

NewtonResult newton_partial_likelihood(const ClusteredSurvivalData& data, const RiskSetIndex& idx,
                                       const std::vector<double>& offset,
                                       const Eigen::VectorXd& beta0, int max_iter,
                                       double grad_tol) {
  NewtonResult res;
  res.beta = beta0;
  const int p = data.p();
  if (p == 0) {
    const auto v = partial_loglik(data, idx, res.beta, offset, 2);
    res.loglik = v.loglik;
    res.info = v.info;
    res.converged = true;
    return res;
  }

  auto cur = partial_loglik(data, idx, res.beta, offset, 2);
  res.loglik = cur.loglik;
  for (int it = 0; it < max_iter; ++it) {
    res.iterations = it + 1;
    Eigen::MatrixXd h = cur.info;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
      h.diagonal().array() += 1e-8 + 1e-8 * h.diagonal().cwiseAbs().maxCoeff();
      ldlt.compute(h);
    }
    Eigen::VectorXd step = ldlt.solve(cur.grad);
    if (!step.allFinite()) break;

    // Step halving keeps the iteration an ascent method.
    double scale = 1.0;
    bool improved = false;
    for (int half = 0; half < 30; ++half) {
      const Eigen::VectorXd cand = res.beta + scale * step;
      const auto val = partial_loglik(data, idx, cand, offset, 0);
      if (std::isfinite(val.loglik) && val.loglik >= res.loglik - 1e-14 * (1.0 + std::abs(res.loglik))) {
        res.beta = cand;
        improved = true;
        break;
      }
      scale *= 0.5;
    }
    if (!improved) break;

    cur = partial_loglik(data, idx, res.beta, offset, 2);
    res.loglik = cur.loglik;
    if (cur.grad.cwiseAbs().maxCoeff() < grad_tol * (1.0 + std::abs(res.loglik))) {
      res.converged = true;
      break;
    }
  }
  res.info = cur.info;
  return res;
}

}  // namespace frailty

#include "frailty/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "frailty/gamma_frailty.hpp"
#include "frailty/optim.hpp"

namespace frailty {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_fit_preconditions(const ClusteredSurvivalData& data) {
  data.validate();
  if (data.n_events() < 1) throw std::invalid_argument("fit: sample has no events");
}

bool theta_on_boundary(double theta, const FitConfig& cfg) {
  return theta <= 10.0 * cfg.theta_min || theta >= 0.99 * cfg.theta_max;
}

// sup-norm that tolerates the covariate-free case
double sup_abs(const Eigen::VectorXd& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

std::vector<double> subject_offsets(const ClusteredSurvivalData& data,
                                    const std::vector<double>& u) {
  std::vector<double> off(data.n());
  for (int i = 0; i < data.n(); ++i) off[i] = u[data.cluster[i]];
  return off;
}

// Standard errors from an information matrix; NaN (with message) when the
// information is numerically singular.
Eigen::VectorXd se_from_info(const Eigen::MatrixXd& info, std::string* message) {
  const int p = static_cast<int>(info.rows());
  Eigen::VectorXd se = Eigen::VectorXd::Constant(p, kNan);
  if (p == 0) return se;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(info);
  if (es.info() != Eigen::Success) return se;
  const double emax = es.eigenvalues().maxCoeff();
  if (!(emax > 0.0) || es.eigenvalues().minCoeff() <= 1e-12 * emax) {
    if (message && message->empty()) *message = "information matrix is numerically singular";
    return se;
  }
  const Eigen::MatrixXd cov = es.eigenvectors() *
                              es.eigenvalues().cwiseInverse().asDiagonal() *
                              es.eigenvectors().transpose();
  for (int j = 0; j < p; ++j) se[j] = std::sqrt(cov(j, j));
  return se;
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::em: return "em";
    case Method::ppl: return "ppl";
    case Method::mml: return "mml";
    case Method::pfl: return "pfl";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  if (name == "em") return Method::em;
  if (name == "ppl" || name == "hl") return Method::ppl;
  if (name == "mml") return Method::mml;
  if (name == "pfl") return Method::pfl;
  throw std::invalid_argument("unknown method '" + name + "' (expected em, ppl, mml, pfl or hl)");
}

double step_marginal_loglik(const ClusteredSurvivalData& data, const RiskSetIndex& idx,
                            const StepCumulativeHazard& h0, const Eigen::VectorXd& beta,
                            double theta) {
  double ll = 0.0;
  for (int v = 0; v < idx.n_times(); ++v) ll += idx.event_counts[v] * std::log(h0.jumps[v]);
  for (int i = 0; i < data.n(); ++i)
    if (data.status[i]) ll += data.x.row(i).dot(beta);
  const auto H = cluster_hazard(data, h0, beta);
  const auto d = data.cluster_events();
  for (int c = 0; c < data.n_clusters; ++c) ll += cluster_marginal_loglik(theta, d[c], H[c]);
  return ll;
}

Eigen::MatrixXd beta_information_joint(const ClusteredSurvivalData& data, const RiskSetIndex& idx,
                                       const Eigen::VectorXd& beta, const std::vector<double>& u,
                                       double theta) {
  const int p = data.p();
  const int g = data.n_clusters;
  if (p == 0) return Eigen::MatrixXd(0, 0);

  // Same risk sets, augmented design [x | cluster indicators], so the joint
  // curvature sees the frailty terms as parameters rather than as data.
  ClusteredSurvivalData aug = data;
  aug.x.conservativeResize(data.n(), p + g);
  aug.x.rightCols(g).setZero();
  for (int i = 0; i < data.n(); ++i) aug.x(i, p + data.cluster[i]) = 1.0;
  Eigen::VectorXd v(p + g);
  v.head(p) = beta;
  for (int c = 0; c < g; ++c) v[p + c] = u[c];

  const auto pl = partial_loglik(aug, idx, v, std::vector<double>(data.n(), 0.0), 2);
  Eigen::MatrixXd k = pl.info;
  if (theta <= 0.0) return k.topLeftCorner(p, p);  // frailty terms pinned, no charge
  // curvature of the log-gamma prior on each u_c
  for (int c = 0; c < g; ++c) k(p + c, p + c) += std::exp(u[c]) / theta;
  return k.topLeftCorner(p, p) -
         k.topRightCorner(p, g) * k.bottomRightCorner(g, g).ldlt().solve(k.bottomLeftCorner(g, p));
}

InnerSolve solve_at_theta(const ClusteredSurvivalData& data, const RiskSetIndex& idx, double theta,
                          Eigen::VectorXd beta0, std::vector<double> u0, const FitConfig& cfg,
                          double param_tol) {
  const double a = 1.0 / theta;
  const auto d = data.cluster_events();

  InnerSolve s;
  s.beta = std::move(beta0);
  s.u = std::move(u0);

  for (int sweep = 0; sweep < cfg.max_inner_iters; ++sweep) {
    s.sweeps = sweep + 1;
    const auto off = subject_offsets(data, s.u);
    const auto nr = newton_partial_likelihood(data, idx, off, s.beta, 25, 1e-10);
    const double dbeta = sup_abs(nr.beta - s.beta);
    s.beta = nr.beta;
    s.info = nr.info;
    if (!s.beta.allFinite() || sup_abs(s.beta) > cfg.beta_ceiling + 10.0) {
      s.ok = false;
      s.marginal = -kInf;
      return s;
    }

    s.h0 = breslow(data, idx, s.beta, off);
    s.H = cluster_hazard(data, s.h0, s.beta);

    double du = 0.0;
    for (int c = 0; c < data.n_clusters; ++c) {
      const double unew = std::log((d[c] + a) / (s.H[c] + a));
      du = std::max(du, std::abs(unew - s.u[c]));
      s.u[c] = unew;
    }
    if (std::max(du, dbeta) < param_tol) {
      s.ok = true;
      break;
    }
  }
  s.marginal = step_marginal_loglik(data, idx, s.h0, s.beta, theta);
  return s;
}

// Curvature of the theta-profile of the marginal log-likelihood, turned into
// a standard error via a centered five-point second difference.
static double profile_se_theta(const ClusteredSurvivalData& data, const RiskSetIndex& idx,
                               double theta_hat, const InnerSolve& center, const FitConfig& cfg) {
  const double h = 1e-3 * std::max(theta_hat, 0.1);
  if (theta_hat - 2.0 * h <= cfg.theta_min) return kNan;

  // The stencil needs tighter inner solutions than the fit itself; sweeps are
  // cheap once warm, so the cap is raised rather than the tolerance.
  FitConfig scfg = cfg;
  scfg.max_inner_iters = std::max(cfg.max_inner_iters, 400);

  double f[5];
  for (int k = -2; k <= 2; ++k) {
    if (k == 0) {
      f[2] = center.marginal;
      continue;
    }
    const auto s = solve_at_theta(data, idx, theta_hat + k * h, center.beta, center.u, scfg, 1e-9);
    if (!s.ok) return kNan;
    f[k + 2] = s.marginal;
  }
  const double d2 = (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h);
  if (!(d2 < -1e-12)) return kNan;
  return 1.0 / std::sqrt(-d2);
}

FrailtyFit fit_ppl(const ClusteredSurvivalData& data, const FitConfig& cfg) {
  check_fit_preconditions(data);
  const auto idx = build_risk_sets(data);
  const int g = data.n_clusters;

  FrailtyFit fit;
  fit.method = Method::ppl;

  const auto cox = newton_partial_likelihood(data, idx, std::vector<double>(data.n(), 0.0),
                                             Eigen::VectorXd::Zero(data.p()));
  Eigen::VectorXd warm_beta = cox.beta;
  std::vector<double> warm_u(g, 0.0);
  InnerSolve best;
  bool have_best = false;
  int evals = 0;

  // Generous sweep cap: the inner fixed point contracts linearly, and an
  // exhausted budget would poison the outer search through ok=false.
  FitConfig icfg = cfg;
  icfg.max_inner_iters = std::max(cfg.max_inner_iters, 200);

  auto profile = [&](double log_theta) {
    auto s = solve_at_theta(data, idx, std::exp(log_theta), warm_beta, warm_u, icfg);
    ++evals;
    warm_beta = s.beta;
    warm_u = s.u;
    fit.loglik_trace.push_back(s.marginal);
    return s.marginal;
  };

  // Seed the warm chain at theta_init so the search starts from a sensible
  // (beta, u) state, then profile over log theta.
  const double l_init = profile(std::log(cfg.theta_init));
  const int budget = std::max(cfg.max_outer_iters - 10, 20);
  const auto br = brent_maximize(profile, std::log(cfg.theta_min), std::log(cfg.theta_max), 1e-6,
                                 budget);

  double log_theta_hat = br.x;
  if (l_init > br.fx) log_theta_hat = std::log(cfg.theta_init);
  fit.theta = std::exp(log_theta_hat);

  best = solve_at_theta(data, idx, fit.theta, warm_beta, warm_u, icfg);
  have_best = best.ok;
  fit.beta = best.beta;
  fit.baseline = best.h0;
  fit.loglik = best.marginal;
  fit.loglik_trace.push_back(best.marginal);
  fit.iterations = evals + 1;
  fit.frailty.resize(g);
  for (int c = 0; c < g; ++c) fit.frailty[c] = std::exp(best.u[c]);

  fit.se_beta =
      se_from_info(beta_information_joint(data, idx, best.beta, best.u, fit.theta), &fit.message);
  fit.theta_boundary = theta_on_boundary(fit.theta, cfg);
  fit.se_theta = fit.theta_boundary
                     ? kNan
                     : profile_se_theta(data, idx, fit.theta, best, cfg);

  fit.converged = have_best && !fit.theta_boundary && br.evals < budget &&
                  sup_abs(fit.beta) < cfg.beta_ceiling;
  if (!have_best && fit.message.empty()) fit.message = "inner solve did not stabilize";
  if (fit.theta_boundary && fit.message.empty()) fit.message = "theta pinned at search bound";
  return fit;
}

FrailtyFit fit_em(const ClusteredSurvivalData& data, const FitConfig& cfg) {
  check_fit_preconditions(data);
  const auto idx = build_risk_sets(data);
  const int g = data.n_clusters;
  const auto d = data.cluster_events();

  FrailtyFit fit;
  fit.method = Method::em;

  const auto cox = newton_partial_likelihood(data, idx, std::vector<double>(data.n(), 0.0),
                                             Eigen::VectorXd::Zero(data.p()));
  Eigen::VectorXd beta = cox.beta;
  std::vector<double> u(g, 0.0);
  double theta = cfg.theta_init;

  StepCumulativeHazard h0 = breslow(data, idx, beta, subject_offsets(data, u));
  std::vector<double> H = cluster_hazard(data, h0, beta);

  double l_prev = step_marginal_loglik(data, idx, h0, beta, theta);
  fit.loglik_trace.push_back(l_prev);

  std::vector<double> zbar(g), elog(g);
  bool diverged = false;

  for (int it = 0; it < cfg.max_outer_iters; ++it) {
    fit.iterations = it + 1;

    // E-step at the current (beta, h0, theta).
    for (int c = 0; c < g; ++c) {
      const auto post = frailty_posterior(theta, d[c], H[c]);
      zbar[c] = post.mean();
      elog[c] = post.mean_log();
      u[c] = std::log(zbar[c]);
    }

    // M-step, survival part: offset Cox step plus Breslow refresh.
    const auto off = subject_offsets(data, u);
    const auto nr = newton_partial_likelihood(data, idx, off, beta, 25, 1e-10);
    const double dbeta = sup_abs(nr.beta - beta);
    beta = nr.beta;
    if (!beta.allFinite() || sup_abs(beta) > cfg.beta_ceiling + 10.0) {
      diverged = true;
      break;
    }
    h0 = breslow(data, idx, beta, off);
    H = cluster_hazard(data, h0, beta);

    // M-step, frailty variance: concave one-dimensional problem.
    double s_z = 0.0, s_elog = 0.0;
    for (int c = 0; c < g; ++c) {
      s_z += zbar[c];
      s_elog += elog[c];
    }
    const auto q = [&](double log_theta) {
      const double aa = std::exp(-log_theta);
      return (aa - 1.0) * s_elog - aa * s_z + g * (aa * std::log(aa) - std::lgamma(aa));
    };
    const auto br = brent_maximize(q, std::log(cfg.theta_min), std::log(cfg.theta_max), 1e-8, 120);
    const double dtheta = std::abs(std::exp(br.x) - theta);
    theta = std::exp(br.x);

    const double l = step_marginal_loglik(data, idx, h0, beta, theta);
    fit.loglik_trace.push_back(l);
    const double dparam = std::max(dbeta, dtheta);
    if (std::abs(l - l_prev) < cfg.tol_loglik * (1.0 + std::abs(l)) || dparam < cfg.tol_param) {
      fit.converged = true;
      l_prev = l;
      break;
    }
    l_prev = l;
  }

  fit.beta = beta;
  fit.theta = theta;
  fit.baseline = h0;
  fit.loglik = l_prev;
  fit.frailty = zbar;
  fit.se_beta = se_from_info(beta_information_joint(data, idx, beta, u, theta), &fit.message);
  fit.theta_boundary = theta_on_boundary(theta, cfg);
  if (diverged) {
    fit.converged = false;
    fit.message = "beta diverged past the guard ceiling";
  }
  if (fit.theta_boundary) {
    fit.converged = false;
    if (fit.message.empty()) fit.message = "theta pinned at search bound";
  }
  if (fit.converged && sup_abs(beta) >= cfg.beta_ceiling) fit.converged = false;

  if (!fit.theta_boundary && !diverged) {
    FitConfig scfg = cfg;
    scfg.max_inner_iters = std::max(cfg.max_inner_iters, 400);
    InnerSolve center = solve_at_theta(data, idx, theta, beta, u, scfg, 1e-9);
    if (center.ok) fit.se_theta = profile_se_theta(data, idx, theta, center, cfg);
    else fit.se_theta = kNan;
  } else {
    fit.se_theta = kNan;
  }
  return fit;
}

FrailtyFit fit_mml(const ClusteredSurvivalData& data, const FitConfig& cfg) {
  check_fit_preconditions(data);
  const int p = data.p();

  FrailtyFit fit;
  fit.method = Method::mml;

  const auto seed = fit_weibull_no_frailty(data);
  Eigen::VectorXd x0(p + 3);
  x0[0] = std::log(seed.baseline.alpha);
  x0[1] = std::log(seed.baseline.lambda);
  x0.segment(2, p) = seed.beta;
  x0[p + 2] = std::log(cfg.theta_init);

  const double lt_min = std::log(cfg.theta_min), lt_max = std::log(cfg.theta_max);
  auto objective = [&](const Eigen::VectorXd& v) -> double {
    if (v[0] < -15.0 || v[0] > 15.0 || v[1] < -300.0 || v[1] > 300.0) return -kInf;
    if (v[p + 2] < lt_min || v[p + 2] > lt_max) return -kInf;
    return weibull_marginal_loglik(data, std::exp(v[0]), std::exp(v[1]), v.segment(2, p),
                                   std::exp(v[p + 2]));
  };
  auto fg = [&](const Eigen::VectorXd& v, Eigen::VectorXd& grad) {
    const double f = objective(v);
    if (std::isfinite(f)) grad = fd_gradient(objective, v);
    return f;
  };

  BfgsOptions opt;
  opt.max_iters = cfg.max_outer_iters;
  opt.grad_tol = 1e-7;
  opt.f_tol = cfg.tol_loglik;
  opt.x_tol = cfg.tol_param;
  const auto res = bfgs_maximize(fg, x0, opt);

  fit.beta = res.x.segment(2, p);
  fit.theta = std::exp(res.x[p + 2]);
  const WeibullBaseline wb{std::exp(res.x[0]), std::exp(res.x[1])};
  fit.baseline = wb;
  fit.loglik = res.fx;
  fit.loglik_trace = res.trace;
  fit.iterations = res.iterations;
  fit.theta_boundary = theta_on_boundary(fit.theta, cfg);
  fit.converged = res.converged && !fit.theta_boundary &&
                  sup_abs(fit.beta) < cfg.beta_ceiling;
  if (fit.theta_boundary && fit.message.empty()) fit.message = "theta pinned at search bound";

  // Delta-method standard errors from the numerical Hessian in working
  // coordinates (log alpha, log lambda, beta, log theta).
  fit.se_beta = Eigen::VectorXd::Constant(p, kNan);
  fit.se_theta = kNan;
  if (!fit.theta_boundary) {
    const Eigen::MatrixXd hess = fd_hessian(objective, res.x, 1e-4);
    if (hess.allFinite()) {
      const Eigen::VectorXd se = se_from_info(-hess, &fit.message);
      fit.se_beta = se.segment(2, p);
      fit.se_theta = fit.theta * se[p + 2];
    } else if (fit.message.empty()) {
      fit.message = "Hessian evaluation failed near the optimum";
    }
  }

  // Posterior frailty means under the fitted parametric baseline.
  const auto d = data.cluster_events();
  std::vector<double> H(data.n_clusters, 0.0);
  for (int i = 0; i < data.n(); ++i)
    H[data.cluster[i]] += wb.cumulative(data.time[i]) * std::exp(data.x.row(i).dot(fit.beta));
  fit.frailty.resize(data.n_clusters);
  for (int c = 0; c < data.n_clusters; ++c)
    fit.frailty[c] = frailty_posterior(fit.theta, d[c], H[c]).mean();
  return fit;
}

StepCumulativeHazard pfl_baseline(const ClusteredSurvivalData& data, const RiskSetIndex& idx,
                                  const Eigen::VectorXd& beta, double theta) {
  const int n = data.n();
  const int g = data.n_clusters;
  const int r = idx.n_times();
  const double a = 1.0 / theta;

  std::vector<double> risk_sum(g, 0.0);  // sum of exp(x'beta) over at-risk members
  std::vector<double> escore(n);
  for (int i = 0; i < n; ++i) {
    escore[i] = std::exp(data.x.row(i).dot(beta));
    risk_sum[data.cluster[i]] += escore[i];
  }
  std::vector<double> H_run(g, 0.0);
  std::vector<int> d_run(g, 0);

  StepCumulativeHazard h0;
  h0.times = idx.event_times;
  h0.jumps.assign(r, 0.0);

  int q = 0;
  for (int v = 0; v < r; ++v) {
    while (q < idx.first_at_risk[v]) {
      const int i = idx.order[q++];
      risk_sum[data.cluster[i]] -= escore[i];
    }
    // Posterior-mean weight of each cluster given its history before t_v.
    double denom = 0.0;
    for (int c = 0; c < g; ++c)
      denom += risk_sum[c] * (a + d_run[c]) / (a + H_run[c]);
    const double jump = idx.event_counts[v] / denom;
    h0.jumps[v] = jump;
    for (int c = 0; c < g; ++c) H_run[c] += jump * std::max(risk_sum[c], 0.0);
    for (int k = idx.death_offsets[v]; k < idx.death_offsets[v + 1]; ++k)
      ++d_run[data.cluster[idx.death_subjects[k]]];
  }
  h0.rebuild_cum();
  return h0;
}

double pfl_objective(const ClusteredSurvivalData& data, const RiskSetIndex& idx,
                     const StepCumulativeHazard& h0, const Eigen::VectorXd& beta, double theta,
                     Eigen::VectorXd* grad) {
  const int p = data.p();
  const auto d = data.cluster_events();
  const int g = data.n_clusters;

  double ll = 0.0;
  for (int v = 0; v < idx.n_times(); ++v) ll += idx.event_counts[v] * std::log(h0.jumps[v]);

  std::vector<double> H(g, 0.0);
  Eigen::MatrixXd xh;  // per-cluster sum of H0(y) e^{x'beta} x
  if (grad) xh = Eigen::MatrixXd::Zero(g, p);
  Eigen::VectorXd gbeta = Eigen::VectorXd::Zero(p);
  for (int i = 0; i < data.n(); ++i) {
    const double w = h0(data.time[i]) * std::exp(data.x.row(i).dot(beta));
    const int c = data.cluster[i];
    H[c] += w;
    if (grad) xh.row(c) += w * data.x.row(i);
    if (data.status[i]) {
      ll += data.x.row(i).dot(beta);
      if (grad) gbeta += data.x.row(i).transpose();
    }
  }
  double gtheta = 0.0;
  for (int c = 0; c < g; ++c) {
    if (!std::isfinite(H[c]) || H[c] > 1e290) return -kInf;
    ll += cluster_marginal_loglik(theta, d[c], H[c]);
    if (grad) {
      const double w = (1.0 + theta * d[c]) / (1.0 + theta * H[c]);
      gbeta.noalias() -= w * xh.row(c).transpose();
      double s = 0.0;
      for (int k = 1; k < d[c]; ++k) s += k / (1.0 + k * theta);
      s += std::log1p(theta * H[c]) / (theta * theta);
      s -= (1.0 / theta + d[c]) * H[c] / (1.0 + theta * H[c]);
      gtheta += s;
    }
  }
  if (grad) {
    grad->resize(p + 1);
    grad->head(p) = gbeta;
    (*grad)[p] = theta * gtheta;  // chain rule onto log theta
  }
  return std::isfinite(ll) ? ll : -kInf;
}

FrailtyFit fit_pfl(const ClusteredSurvivalData& data, const FitConfig& cfg) {
  check_fit_preconditions(data);
  const auto idx = build_risk_sets(data);
  const int p = data.p();
  const int g = data.n_clusters;

  FrailtyFit fit;
  fit.method = Method::pfl;

  const auto cox = newton_partial_likelihood(data, idx, std::vector<double>(data.n(), 0.0),
                                             Eigen::VectorXd::Zero(p));
  Eigen::VectorXd beta = cox.beta;
  double theta = cfg.theta_init;
  StepCumulativeHazard h0 = pfl_baseline(data, idx, beta, theta);
  fit.loglik_trace.push_back(pfl_objective(data, idx, h0, beta, theta, nullptr));

  const double lt_min = std::log(cfg.theta_min), lt_max = std::log(cfg.theta_max);
  bool stabilized = false, inner_ok = true;

  for (int outer = 0; outer < cfg.max_outer_iters; ++outer) {
    fit.iterations = outer + 1;
    auto fg = [&](const Eigen::VectorXd& v, Eigen::VectorXd& gradv) -> double {
      if (v[p] < lt_min || v[p] > lt_max) return -kInf;
      return pfl_objective(data, idx, h0, v.head(p), std::exp(v[p]), &gradv);
    };
    Eigen::VectorXd v0(p + 1);
    v0.head(p) = beta;
    v0[p] = std::log(theta);
    BfgsOptions opt;
    opt.max_iters = 100;
    opt.grad_tol = 1e-7;
    const auto res = bfgs_maximize(fg, v0, opt);
    inner_ok = res.converged;

    const double dparam =
        std::max(sup_abs(res.x.head(p) - beta), std::abs(res.x[p] - std::log(theta)));
    beta = res.x.head(p);
    theta = std::exp(res.x[p]);
    h0 = pfl_baseline(data, idx, beta, theta);
    fit.loglik_trace.push_back(res.fx);
    if (!beta.allFinite() || sup_abs(beta) > cfg.beta_ceiling + 10.0) break;
    if (dparam < cfg.tol_param) {
      stabilized = true;
      break;
    }
  }

  fit.beta = beta;
  fit.theta = theta;
  fit.baseline = h0;
  fit.loglik = pfl_objective(data, idx, h0, beta, theta, nullptr);
  fit.theta_boundary = theta_on_boundary(theta, cfg);
  fit.converged = stabilized && inner_ok && !fit.theta_boundary &&
                  beta.allFinite() && sup_abs(beta) < cfg.beta_ceiling;
  if (!stabilized && fit.message.empty()) fit.message = "outer baseline loop did not stabilize";
  if (fit.theta_boundary) fit.message = "theta pinned at search bound";

  // Plug-in covariance: numerical Hessian of the fixed-baseline objective.
  fit.se_beta = Eigen::VectorXd::Constant(p, kNan);
  fit.se_theta = kNan;
  if (!fit.theta_boundary) {
    Eigen::VectorXd vhat(p + 1);
    vhat.head(p) = beta;
    vhat[p] = std::log(theta);
    auto value_only = [&](const Eigen::VectorXd& v) {
      return pfl_objective(data, idx, h0, v.head(p), std::exp(v[p]), nullptr);
    };
    const Eigen::MatrixXd hess = fd_hessian(value_only, vhat, 1e-4);
    if (hess.allFinite()) {
      const Eigen::VectorXd se = se_from_info(-hess, &fit.message);
      fit.se_beta = se.head(p);
      fit.se_theta = theta * se[p];
    }
  }

  const auto H = cluster_hazard(data, h0, beta);
  const auto d = data.cluster_events();
  fit.frailty.resize(g);
  for (int c = 0; c < g; ++c) fit.frailty[c] = frailty_posterior(theta, d[c], H[c]).mean();
  return fit;
}

FrailtyFit fit(Method method, const ClusteredSurvivalData& data, const FitConfig& cfg) {
  switch (method) {
    case Method::em: return fit_em(data, cfg);
    case Method::ppl: return fit_ppl(data, cfg);
    case Method::mml: return fit_mml(data, cfg);
    case Method::pfl: return fit_pfl(data, cfg);
  }
  throw std::invalid_argument("fit: unknown method");
}

}  // namespace frailty

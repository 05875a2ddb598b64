#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "frailty/partial_likelihood.hpp"
#include "frailty/reference.hpp"
#include "frailty/rng.hpp"
#include "frailty/risk_set.hpp"

using namespace frailty;

namespace {

ClusteredSurvivalData synth_data(int n, int p, std::uint64_t key, double event_prob = 0.75) {
  Rng rng(key);
  ClusteredSurvivalData d;
  d.x.resize(n, p);
  for (int i = 0; i < n; ++i) {
    d.time.push_back(0.1 + 2.0 * rng.uniform());
    d.status.push_back(rng.uniform() < event_prob ? 1 : 0);
    d.cluster.push_back(i % 4);
    for (int j = 0; j < p; ++j) d.x(i, j) = rng.normal() * 0.7;
  }
  d.n_clusters = 4;
  d.time[2] = d.time[9];  // a tie
  d.validate();
  return d;
}

}  // namespace

TEST_CASE("symmetric tie: maximum at zero with known value") {
  // two subjects, x = +1 and -1, both die at the same instant
  ClusteredSurvivalData d;
  d.time = {1.0, 1.0};
  d.status = {1, 1};
  d.cluster = {0, 1};
  d.n_clusters = 2;
  d.x.resize(2, 1);
  d.x << 1.0, -1.0;
  const RiskSetIndex idx = build_risk_sets(d);
  const std::vector<double> off(2, 0.0);

  // l(beta) = -2 log(e^b + e^-b); at 0 that is -2 log 2
  const PartialLikelihoodValue at0 = partial_loglik(d, idx, Eigen::VectorXd::Zero(1), off, 2);
  CHECK(at0.loglik == doctest::Approx(-1.3862943611198906).epsilon(1e-15));
  CHECK(at0.grad[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(at0.info(0, 0) == doctest::Approx(2.0).epsilon(1e-14));  // 2 * var of x in risk set

  const NewtonResult fit =
      newton_partial_likelihood(d, idx, off, Eigen::VectorXd::Constant(1, 0.7));
  CHECK(fit.converged);
  CHECK(fit.beta[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(fit.loglik == doctest::Approx(-1.3862943611198906).epsilon(1e-12));
}

TEST_CASE("newton agrees with an exhaustive grid search") {
  ClusteredSurvivalData d;
  d.time = {0.5, 0.9, 1.3, 1.8, 2.2, 3.0};
  d.status = {1, 0, 1, 1, 0, 1};
  d.cluster = {0, 0, 0, 1, 1, 1};
  d.n_clusters = 2;
  d.x.resize(6, 1);
  d.x << 0.3, -1.2, 0.8, -0.5, 1.4, 0.1;
  const RiskSetIndex idx = build_risk_sets(d);
  const std::vector<double> off(6, 0.0);

  const double grid = reference::grid_argmax_beta(d, off, -3.0, 3.0, 1e-4);
  const NewtonResult fit = newton_partial_likelihood(d, idx, off, Eigen::VectorXd::Zero(1));
  CHECK(fit.converged);
  CHECK(fit.beta[0] == doctest::Approx(grid).epsilon(2e-4));
}

TEST_CASE("value and gradient match the naive reference") {
  const ClusteredSurvivalData d = synth_data(90, 3, 101);
  const RiskSetIndex idx = build_risk_sets(d);
  Rng rng(7);
  Eigen::VectorXd beta(3);
  beta << 0.5, -0.4, 0.9;
  std::vector<double> off(d.n());
  for (auto& o : off) o = 0.4 * rng.normal();

  const PartialLikelihoodValue v = partial_loglik(d, idx, beta, off, 1);
  CHECK(v.loglik ==
        doctest::Approx(reference::partial_loglik_naive(d, beta, off)).epsilon(1e-11));
  const Eigen::VectorXd g = reference::partial_grad_naive(d, beta, off);
  for (int j = 0; j < 3; ++j) CHECK(v.grad[j] == doctest::Approx(g[j]).epsilon(1e-10));
}

TEST_CASE("gradient and information match finite differences") {
  const ClusteredSurvivalData d = synth_data(70, 2, 202);
  const RiskSetIndex idx = build_risk_sets(d);
  const std::vector<double> off(d.n(), 0.0);
  Eigen::VectorXd beta(2);
  beta << 0.3, -0.8;

  const PartialLikelihoodValue v = partial_loglik(d, idx, beta, off, 2);
  const double h = 1e-6;
  for (int j = 0; j < 2; ++j) {
    Eigen::VectorXd bp = beta, bm = beta;
    bp[j] += h;
    bm[j] -= h;
    const double fd =
        (partial_loglik(d, idx, bp, off, 0).loglik - partial_loglik(d, idx, bm, off, 0).loglik) /
        (2 * h);
    CHECK(v.grad[j] == doctest::Approx(fd).epsilon(1e-6));
    // info = -d grad / d beta
    const Eigen::VectorXd gp = partial_loglik(d, idx, bp, off, 1).grad;
    const Eigen::VectorXd gm = partial_loglik(d, idx, bm, off, 1).grad;
    for (int k = 0; k < 2; ++k)
      CHECK(v.info(j, k) == doctest::Approx(-(gp[k] - gm[k]) / (2 * h)).epsilon(1e-5));
  }
}

TEST_CASE("constant offset shifts change nothing") {
  const ClusteredSurvivalData d = synth_data(50, 2, 303);
  const RiskSetIndex idx = build_risk_sets(d);
  Eigen::VectorXd beta(2);
  beta << -0.2, 0.6;
  std::vector<double> off(d.n(), 0.0), shifted(d.n(), 7.3);

  const PartialLikelihoodValue a = partial_loglik(d, idx, beta, off, 2);
  const PartialLikelihoodValue b = partial_loglik(d, idx, beta, shifted, 2);
  CHECK(a.loglik == doctest::Approx(b.loglik).epsilon(1e-11));
  for (int j = 0; j < 2; ++j) CHECK(a.grad[j] == doctest::Approx(b.grad[j]).epsilon(1e-10));
  CHECK((a.info - b.info).cwiseAbs().maxCoeff() < 1e-9);

  const NewtonResult fa = newton_partial_likelihood(d, idx, off, Eigen::VectorXd::Zero(2));
  const NewtonResult fb = newton_partial_likelihood(d, idx, shifted, Eigen::VectorXd::Zero(2));
  CHECK(fa.converged);
  CHECK(fb.converged);
  for (int j = 0; j < 2; ++j) CHECK(fa.beta[j] == doctest::Approx(fb.beta[j]).epsilon(1e-8));
}

TEST_CASE("extreme linear predictors do not overflow") {
  ClusteredSurvivalData d = synth_data(40, 1, 404);
  const RiskSetIndex idx = build_risk_sets(d);
  Eigen::VectorXd beta(1);
  beta << 400.0;  // exp(eta) would overflow without the max-shift
  const std::vector<double> off(d.n(), 0.0);
  const PartialLikelihoodValue v = partial_loglik(d, idx, beta, off, 2);
  CHECK(std::isfinite(v.loglik));
  CHECK(std::isfinite(v.grad[0]));
  CHECK(std::isfinite(v.info(0, 0)));
}

TEST_CASE("covariate-free model converges trivially") {
  ClusteredSurvivalData d;
  d.time = {1.0, 2.0, 3.0};
  d.status = {1, 1, 0};
  d.cluster = {0, 1, 0};
  d.n_clusters = 2;
  d.x.resize(3, 0);
  const RiskSetIndex idx = build_risk_sets(d);
  const NewtonResult fit =
      newton_partial_likelihood(d, idx, std::vector<double>(3, 0.0), Eigen::VectorXd::Zero(0));
  CHECK(fit.converged);
  CHECK(fit.beta.size() == 0);
  // l = -log 3 - log 2 for unit weights
  CHECK(fit.loglik == doctest::Approx(-std::log(3.0) - std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("newton recovers a strong effect") {
  // covariate equal to -log(time) scaled: strongly informative
  Rng rng(606);
  ClusteredSurvivalData d;
  const int n = 150;
  d.x.resize(n, 1);
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    const double t = -std::log(rng.uniform()) / std::exp(1.2 * x);
    d.time.push_back(t);
    d.status.push_back(1);
    d.cluster.push_back(i % 3);
    d.x(i, 0) = x;
  }
  d.n_clusters = 3;
  const RiskSetIndex idx = build_risk_sets(d);
  const NewtonResult fit =
      newton_partial_likelihood(d, idx, std::vector<double>(n, 0.0), Eigen::VectorXd::Zero(1));
  CHECK(fit.converged);
  CHECK(fit.beta[0] == doctest::Approx(1.2).epsilon(0.25));
  CHECK(fit.info(0, 0) > 0.0);
}

#pragma once

#include <Eigen/Dense>
#include <functional>

namespace frailty {

struct BrentResult {
  double x = 0.0;
  double fx = 0.0;  // maximum value
  int evals = 0;
};

// Bounded 1-D maximization (Brent's localmin on -f).  Assumes f is unimodal
// enough on [lo, hi]; returns the best point ever evaluated, so the result
// never degrades below any probe.
BrentResult brent_maximize(const std::function<double(double)>& f, double lo, double hi,
                           double xtol, int max_evals = 200);

struct BfgsOptions {
  int max_iters = 200;
  double grad_tol = 1e-6;    // on sup-norm of gradient, scaled by 1+|f|
  double f_tol = 1e-10;      // relative objective change
  double x_tol = 1e-9;       // sup-norm step size
  int max_backtracks = 40;
};

struct BfgsResult {
  Eigen::VectorXd x;
  double fx = 0.0;
  Eigen::VectorXd grad;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;  // objective after each accepted step
};

// Quasi-Newton maximization with Armijo backtracking.  `fg` returns the
// objective and fills the gradient; return -inf to reject a point outright.
BfgsResult bfgs_maximize(
    const std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>& fg,
    const Eigen::VectorXd& x0, const BfgsOptions& opt = {});

// Central-difference gradient helper for objectives without analytic
// derivatives; steps are scaled per coordinate.
Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& x, double rel_step = 1e-6);

// Dense symmetric FD Hessian (central differences, h_j = step*(1+|x_j|)).
Eigen::MatrixXd fd_hessian(const std::function<double(const Eigen::VectorXd&)>& f,
                           const Eigen::VectorXd& x, double rel_step = 1e-4);

}  // namespace frailty

#include "frailty/optim.hpp"

#include <cmath>
#include <limits>

namespace frailty {

BrentResult brent_maximize(const std::function<double(double)>& f, double lo, double hi,
                           double xtol, int max_evals) {
  // Brent's derivative-free local minimizer applied to -f, with best-seen
  // tracking on top.
  constexpr double kGold = 0.3819660112501051;
  double a = lo, b = hi;
  double x = a + kGold * (b - a), w = x, v = x;
  int evals = 0;
  auto eval = [&](double t) {
    ++evals;
    return -f(t);
  };
  double fx = eval(x), fw = fx, fv = fx;
  double best_x = x, best_f = fx;
  double d = 0.0, e = 0.0;

  while (evals < max_evals) {
    const double m = 0.5 * (a + b);
    const double tol = xtol * (std::abs(x) + 1e-12) + 1e-12;
    const double tol2 = 2.0 * tol;
    if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) break;

    bool parabolic = false;
    if (std::abs(e) > tol) {
      const double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double e_old = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * e_old) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = (x < m) ? tol : -tol;
        parabolic = true;
      }
    }
    if (!parabolic) {
      e = (x < m) ? b - x : a - x;
      d = kGold * e;
    }
    const double u = (std::abs(d) >= tol) ? x + d : x + ((d > 0.0) ? tol : -tol);
    const double fu = eval(u);
    if (fu < best_f) {
      best_f = fu;
      best_x = u;
    }
    if (fu <= fx) {
      if (u < x) b = x; else a = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  return BrentResult{best_x, -best_f, evals};
}

BfgsResult bfgs_maximize(
    const std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>& fg,
    const Eigen::VectorXd& x0, const BfgsOptions& opt) {
  const int p = static_cast<int>(x0.size());
  BfgsResult res;
  res.x = x0;
  res.grad.resize(p);
  res.fx = fg(res.x, res.grad);
  res.trace.push_back(res.fx);
  if (!std::isfinite(res.fx)) return res;

  Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(p, p);
  Eigen::VectorXd g_new(p);
  bool reset_once = false;

  for (int it = 0; it < opt.max_iters; ++it) {
    res.iterations = it + 1;
    if (res.grad.cwiseAbs().maxCoeff() < opt.grad_tol * (1.0 + std::abs(res.fx))) {
      res.converged = true;
      break;
    }
    Eigen::VectorXd dir = hinv * res.grad;
    double slope = res.grad.dot(dir);
    if (!(slope > 0.0) || !dir.allFinite()) {
      hinv.setIdentity();
      dir = res.grad;
      slope = res.grad.squaredNorm();
    }

    double step = 1.0;
    double f_new = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd x_new;
    bool accepted = false;
    for (int bt = 0; bt < opt.max_backtracks; ++bt) {
      x_new = res.x + step * dir;
      f_new = fg(x_new, g_new);
      if (std::isfinite(f_new) && f_new >= res.fx + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (!reset_once) {
        // One shot at recovering with a fresh metric before giving up.
        reset_once = true;
        hinv.setIdentity();
        continue;
      }
      break;
    }

    const Eigen::VectorXd s = x_new - res.x;
    const Eigen::VectorXd y = res.grad - g_new;  // curvature of -f
    const double sy = s.dot(y);
    const double df = f_new - res.fx;
    res.x = x_new;
    res.fx = f_new;
    res.grad = g_new;
    res.trace.push_back(res.fx);

    if (sy > 1e-12 * s.norm() * y.norm()) {
      const Eigen::VectorXd hy = hinv * y;
      const double yhy = y.dot(hy);
      hinv += ((sy + yhy) / (sy * sy)) * (s * s.transpose());
      const Eigen::MatrixXd cross = hy * s.transpose();
      hinv -= (cross + cross.transpose()) / sy;
    }

    if (std::abs(df) < opt.f_tol * (1.0 + std::abs(res.fx)) &&
        s.cwiseAbs().maxCoeff() < opt.x_tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& x, double rel_step) {
  const int p = static_cast<int>(x.size());
  Eigen::VectorXd g(p);
  Eigen::VectorXd xp = x;
  for (int j = 0; j < p; ++j) {
    const double h = rel_step * (1.0 + std::abs(x[j]));
    xp[j] = x[j] + h;
    const double fp = f(xp);
    xp[j] = x[j] - h;
    const double fm = f(xp);
    xp[j] = x[j];
    g[j] = (fp - fm) / (2.0 * h);
  }
  return g;
}

Eigen::MatrixXd fd_hessian(const std::function<double(const Eigen::VectorXd&)>& f,
                           const Eigen::VectorXd& x, double rel_step) {
  const int p = static_cast<int>(x.size());
  Eigen::MatrixXd h(p, p);
  Eigen::VectorXd step(p);
  for (int j = 0; j < p; ++j) step[j] = rel_step * (1.0 + std::abs(x[j]));
  const double f0 = f(x);
  Eigen::VectorXd xt = x;
  for (int j = 0; j < p; ++j) {
    xt[j] = x[j] + step[j];
    const double fp = f(xt);
    xt[j] = x[j] - step[j];
    const double fm = f(xt);
    xt[j] = x[j];
    h(j, j) = (fp - 2.0 * f0 + fm) / (step[j] * step[j]);
    for (int k = j + 1; k < p; ++k) {
      xt[j] = x[j] + step[j]; xt[k] = x[k] + step[k];
      const double fpp = f(xt);
      xt[k] = x[k] - step[k];
      const double fpm = f(xt);
      xt[j] = x[j] - step[j];
      const double fmm = f(xt);
      xt[k] = x[k] + step[k];
      const double fmp = f(xt);
      xt[j] = x[j]; xt[k] = x[k];
      h(j, k) = h(k, j) = (fpp - fpm - fmp + fmm) / (4.0 * step[j] * step[k]);
    }
  }
  return h;
}

}  // namespace frailty

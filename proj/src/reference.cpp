#include "frailty/reference.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "frailty/gamma_frailty.hpp"

namespace frailty::reference {

namespace {

// Distinct event times, ascending.
std::vector<double> event_times(const ClusteredSurvivalData& data) {
  std::set<double> t;
  for (int i = 0; i < data.n(); ++i)
    if (data.status[i]) t.insert(data.time[i]);
  return {t.begin(), t.end()};
}

}  // namespace

double partial_loglik_naive(const ClusteredSurvivalData& data, const Eigen::VectorXd& beta,
                            const std::vector<double>& offset) {
  double ll = 0.0;
  for (const double tv : event_times(data)) {
    double denom = 0.0;
    int deaths = 0;
    for (int i = 0; i < data.n(); ++i)
      if (data.time[i] >= tv) denom += std::exp(data.x.row(i).dot(beta) + offset[i]);
    for (int i = 0; i < data.n(); ++i)
      if (data.status[i] && data.time[i] == tv) {
        ll += data.x.row(i).dot(beta) + offset[i];
        ++deaths;
      }
    ll -= deaths * std::log(denom);
  }
  return ll;
}

Eigen::VectorXd partial_grad_naive(const ClusteredSurvivalData& data, const Eigen::VectorXd& beta,
                                   const std::vector<double>& offset) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(data.p());
  for (const double tv : event_times(data)) {
    double denom = 0.0;
    Eigen::VectorXd num = Eigen::VectorXd::Zero(data.p());
    for (int i = 0; i < data.n(); ++i)
      if (data.time[i] >= tv) {
        const double w = std::exp(data.x.row(i).dot(beta) + offset[i]);
        denom += w;
        num += w * data.x.row(i).transpose();
      }
    for (int i = 0; i < data.n(); ++i)
      if (data.status[i] && data.time[i] == tv) g += data.x.row(i).transpose() - num / denom;
  }
  return g;
}

StepCumulativeHazard breslow_naive(const ClusteredSurvivalData& data, const Eigen::VectorXd& beta,
                                   const std::vector<double>& offset) {
  StepCumulativeHazard h0;
  h0.times = event_times(data);
  for (const double tv : h0.times) {
    double denom = 0.0;
    int deaths = 0;
    for (int i = 0; i < data.n(); ++i) {
      if (data.time[i] >= tv) denom += std::exp(data.x.row(i).dot(beta) + offset[i]);
      if (data.status[i] && data.time[i] == tv) ++deaths;
    }
    h0.jumps.push_back(deaths / denom);
  }
  h0.rebuild_cum();
  return h0;
}

double integrate(const std::function<double(double)>& f, double a, double b, int panels) {
  // 16-point Gauss-Legendre nodes/weights on [-1, 1].
  static const double xk[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                               0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                               0.9445750230732326, 0.9894009349916499};
  static const double wk[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                               0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                               0.0622535239386479, 0.0271524594117541};
  double acc = 0.0;
  const double hw = (b - a) / panels;
  for (int k = 0; k < panels; ++k) {
    const double mid = a + (k + 0.5) * hw;
    for (int j = 0; j < 8; ++j)
      acc += wk[j] * (f(mid + 0.5 * hw * xk[j]) + f(mid - 0.5 * hw * xk[j]));
  }
  return acc * 0.5 * hw;
}

namespace {

// integral over z of z^power * exp(-s*z) * density(theta, z), via z = w^2.
double frailty_integral(double theta, double s, double power, bool log_weight) {
  const double a = 1.0 / theta;
  // Effective gamma law in the integrand: shape a + power, rate a + s.
  const double shape = a + power;
  const double rate = a + s;
  const double mode_z = shape / rate;
  const double spread = std::sqrt(shape) / rate;
  const double zmax = mode_z + 40.0 * spread + 10.0 / rate;
  auto f = [&](double w) {
    const double z = w * w;
    if (z <= 0.0) return 0.0;
    const double lg = power * std::log(z) - s * z + log_frailty_density(theta, z);
    const double v = std::exp(lg) * 2.0 * w;
    return log_weight ? v * std::log(z) : v;
  };
  return integrate(f, 0.0, std::sqrt(zmax), 600);
}

}  // namespace

double laplace_quad(double theta, double s, int q) {
  const double sign = (q % 2 == 0) ? 1.0 : -1.0;
  return sign * frailty_integral(theta, s, q, false);
}

double posterior_mean_quad(double theta, int d, double H) {
  const double num = frailty_integral(theta, H, d + 1.0, false);
  const double den = frailty_integral(theta, H, d, false);
  return num / den;
}

double posterior_mean_log_quad(double theta, int d, double H) {
  const double num = frailty_integral(theta, H, d, true);
  const double den = frailty_integral(theta, H, d, false);
  return num / den;
}

double density_integral_quad(double theta) { return frailty_integral(theta, 0.0, 0.0, false); }

double density_mean_quad(double theta) { return frailty_integral(theta, 0.0, 1.0, false); }

double grid_argmax_beta(const ClusteredSurvivalData& data, const std::vector<double>& offset,
                        double lo, double hi, double step) {
  double best_b = lo, best_v = -1e300;
  Eigen::VectorXd beta(1);
  for (double b = lo; b <= hi; b += step) {
    beta[0] = b;
    const double v = partial_loglik_naive(data, beta, offset);
    if (v > best_v) {
      best_v = v;
      best_b = b;
    }
  }
  return best_b;
}

}  // namespace frailty::reference

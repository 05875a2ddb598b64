#include "frailty/gamma_frailty.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace frailty {

double digamma(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("digamma: argument must be positive");
  double acc = 0.0;
  while (x < 10.0) {  // truncation error of the 6-term tail is ~1e-15 from here
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x, inv2 = inv * inv;
  // Bernoulli tail: -sum B_{2n} / (2n x^{2n}), n = 1..6.
  const double tail = inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0
                      - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * 691.0 / 32760.0)))));
  return acc + std::log(x) - 0.5 * inv - tail;
}

double SignedLog::value() const {
  if (sign == 0) return 0.0;
  return sign * std::exp(log_abs);
}

SignedLog laplace_derivative(double theta, double s, int q) {
  if (theta < 0.0 || s < 0.0 || q < 0)
    throw std::invalid_argument("laplace_derivative: need theta >= 0, s >= 0, q >= 0");
  double log_abs;
  if (theta == 0.0) {
    log_abs = -s;  // L(s) = exp(-s), every derivative has unit coefficient
  } else {
    double log_coef = 0.0;
    for (int k = 1; k < q; ++k) log_coef += std::log1p(k * theta);
    log_abs = log_coef - (1.0 / theta + q) * std::log1p(theta * s);
  }
  return SignedLog{log_abs, (q % 2 == 0) ? 1 : -1};
}

double laplace(double theta, double s, int q) {
  return laplace_derivative(theta, s, q).value();
}

double GammaPosterior::mean_log() const {
  return digamma(shape) - std::log(rate);
}

GammaPosterior frailty_posterior(double theta, int d, double H) {
  if (!(theta > 0.0)) throw std::invalid_argument("frailty_posterior: theta must be positive");
  if (d < 0 || H < 0.0) throw std::invalid_argument("frailty_posterior: need d >= 0, H >= 0");
  const double a = 1.0 / theta;
  return GammaPosterior{a + d, a + H};
}

double log_frailty_density(double theta, double z) {
  if (!(theta > 0.0) || !(z > 0.0))
    throw std::invalid_argument("log_frailty_density: need theta > 0, z > 0");
  const double a = 1.0 / theta;
  return a * std::log(a) - std::lgamma(a) + (a - 1.0) * std::log(z) - a * z;
}

double cluster_marginal_loglik(double theta, int d, double H) {
  if (theta < 0.0 || d < 0 || H < 0.0)
    throw std::invalid_argument("cluster_marginal_loglik: bad arguments");
  if (theta == 0.0) return -H;
  double acc = 0.0;
  for (int k = 1; k < d; ++k) acc += std::log1p(k * theta);
  return acc - (1.0 / theta + d) * std::log1p(theta * H);
}

}  // namespace frailty

#pragma once

namespace frailty {

// Digamma for x > 0: upward recurrence until the argument reaches 6, then
// the asymptotic expansion (log x - 1/2x - six Bernoulli terms).
double digamma(double x);

// Value carried as log-magnitude + sign so high-order Laplace derivatives
// survive under/overflow.
struct SignedLog {
  double log_abs;  // log |value|; -inf encodes zero
  int sign;        // -1, 0, +1

  double value() const;
};

// q-th derivative of the gamma frailty Laplace transform
//   L(s) = (1 + theta*s)^(-1/theta),  L^(q)(s) = (-1)^q (1+theta*s)^(-1/theta-q) prod_{k<q}(1+k*theta)
// evaluated for theta >= 0 (theta = 0 degenerates to exp(-s)), s >= 0, q >= 0.
SignedLog laplace_derivative(double theta, double s, int q);

// Convenience: plain value of L^(q)(s) (may underflow to 0 for extreme q).
double laplace(double theta, double s, int q);

// Posterior law of a cluster frailty given d events and cumulated hazard H:
// Gamma(shape = 1/theta + d, rate = 1/theta + H).
struct GammaPosterior {
  double shape;
  double rate;

  double mean() const { return shape / rate; }
  double mean_log() const;  // E[log z] = digamma(shape) - log(rate)
};

GammaPosterior frailty_posterior(double theta, int d, double H);

// log density of the mean-one Gamma(1/theta, theta) frailty law at z > 0.
double log_frailty_density(double theta, double z);

// Per-cluster marginal contribution log[(-1)^d L^(d)(H)]:
//   sum_{k<d} log(1+k*theta) - (1/theta + d) log(1 + theta*H),
// written with log1p so it stays stable as theta -> 0.
double cluster_marginal_loglik(double theta, int d, double H);

}  // namespace frailty

#pragma once

namespace frailty {

// Inverse standard normal CDF (rational approximation, |abs error| < 2e-9).
double normal_quantile(double p);

struct ConfidenceInterval {
  double lo;
  double hi;

  // Closed endpoints.
  bool covers(double truth) const { return lo <= truth && truth <= hi; }
};

// Symmetric Wald interval: est -+ z * se.
ConfidenceInterval ci_wald(double est, double se, double level);

// Log-scale interval for a positive parameter: est * exp(-+ z * se / est).
// Respects positivity and is the natural companion for variance parameters.
ConfidenceInterval ci_log_scale(double est, double se, double level);

}  // namespace frailty

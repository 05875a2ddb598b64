#include "frailty/inference.hpp"

#include <cmath>
#include <stdexcept>

namespace frailty {

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p must be in (0,1)");

  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;

  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

namespace {
double level_z(double level) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("level must be in (0,1)");
  return normal_quantile(0.5 + 0.5 * level);
}
}  // namespace

ConfidenceInterval ci_wald(double est, double se, double level) {
  if (!(se >= 0.0)) throw std::invalid_argument("ci_wald: se must be nonnegative");
  const double z = level_z(level);
  return ConfidenceInterval{est - z * se, est + z * se};
}

ConfidenceInterval ci_log_scale(double est, double se, double level) {
  if (!(est > 0.0)) throw std::invalid_argument("ci_log_scale: estimate must be positive");
  if (!(se >= 0.0)) throw std::invalid_argument("ci_log_scale: se must be nonnegative");
  const double z = level_z(level);
  const double w = std::exp(z * se / est);
  return ConfidenceInterval{est / w, est * w};
}

}  // namespace frailty

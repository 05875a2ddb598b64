#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "frailty/baseline.hpp"
#include "frailty/data.hpp"
#include "frailty/risk_set.hpp"

// Deliberately plain implementations: every risk set is rebuilt by scanning
// the whole sample, integrals are done by brute-force quadrature.  They exist
// as independent checks on the optimized kernels and as the slow side of the
// benchmark; keep them free of clever bookkeeping.
namespace frailty::reference {

double partial_loglik_naive(const ClusteredSurvivalData& data, const Eigen::VectorXd& beta,
                            const std::vector<double>& offset);

Eigen::VectorXd partial_grad_naive(const ClusteredSurvivalData& data, const Eigen::VectorXd& beta,
                                   const std::vector<double>& offset);

StepCumulativeHazard breslow_naive(const ClusteredSurvivalData& data, const Eigen::VectorXd& beta,
                                   const std::vector<double>& offset);

// Composite Gauss-Legendre on [a, b].
double integrate(const std::function<double(double)>& f, double a, double b, int panels = 256);

// Quadrature versions of the gamma-frailty integrals (substitution z = w^2
// tames the density near zero).
double laplace_quad(double theta, double s, int q);
double posterior_mean_quad(double theta, int d, double H);
double posterior_mean_log_quad(double theta, int d, double H);
double density_integral_quad(double theta);   // integral of the frailty density
double density_mean_quad(double theta);       // its first moment

// Exhaustive grid argmax of the one-covariate partial likelihood.
double grid_argmax_beta(const ClusteredSurvivalData& data, const std::vector<double>& offset,
                        double lo, double hi, double step);

}  // namespace frailty::reference

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "frailty/gamma_frailty.hpp"
#include "frailty/reference.hpp"

using namespace frailty;

TEST_CASE("digamma at classical points") {
  // psi(1) = -gamma, psi(2) = 1-gamma, psi(0.5) = -gamma - 2 log 2
  CHECK(digamma(1.0) == doctest::Approx(-0.57721566490153287).epsilon(1e-13));
  CHECK(digamma(2.0) == doctest::Approx(0.42278433509846713).epsilon(1e-13));
  CHECK(digamma(0.5) == doctest::Approx(-1.9635100260214235).epsilon(1e-13));
  CHECK(digamma(10.0) == doctest::Approx(2.2517525890667214).epsilon(1e-13));
  // recurrence psi(x+1) = psi(x) + 1/x across the shift boundary
  for (double x : {0.3, 1.7, 4.9, 6.2}) {
    CHECK(digamma(x + 1.0) == doctest::Approx(digamma(x) + 1.0 / x).epsilon(1e-12));
  }
}

TEST_CASE("laplace transform closed forms") {
  // theta=0.5, s=1: (1 + 0.5)^(-2) = 4/9
  CHECK(laplace(0.5, 1.0, 0) == doctest::Approx(4.0 / 9.0).epsilon(1e-14));
  // theta -> 0 limit is exp(-s)
  CHECK(laplace(0.0, 2.5, 0) == doctest::Approx(std::exp(-2.5)).epsilon(1e-14));
  // derivative signs alternate
  for (int q = 0; q <= 6; ++q) {
    const SignedLog d = laplace_derivative(0.7, 1.3, q);
    CHECK(d.sign == (q % 2 == 0 ? 1 : -1));
    CHECK(std::isfinite(d.log_abs));
  }
}

TEST_CASE("laplace derivatives match quadrature") {
  // Tolerance reflects the quadrature itself: for 1/theta < 1 the density is
  // singular at zero and the reference integral is only ~1e-7 accurate.
  for (double theta : {0.25, 0.6, 1.5}) {
    for (double s : {0.2, 1.0, 4.0}) {
      for (int q : {0, 1, 2, 3}) {
        const SignedLog d = laplace_derivative(theta, s, q);
        CHECK(d.value() == doctest::Approx(reference::laplace_quad(theta, s, q)).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("posterior distribution of the frailty") {
  // theta=0.5, d=2, H=1: gamma with shape 1/0.5+2 = 4, rate 1/0.5+1 = 3
  const GammaPosterior post = frailty_posterior(0.5, 2, 1.0);
  CHECK(post.shape == doctest::Approx(4.0));
  CHECK(post.rate == doctest::Approx(3.0));
  CHECK(post.mean() == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  // E log z = psi(4) - log 3
  CHECK(post.mean_log() == doctest::Approx(0.1575053797636905).epsilon(1e-12));
}

TEST_CASE("posterior moments match quadrature") {
  for (double theta : {0.3, 0.8, 1.6}) {
    for (int d : {0, 1, 3}) {
      for (double H : {0.1, 1.0, 5.0}) {
        const GammaPosterior post = frailty_posterior(theta, d, H);
        CHECK(post.mean() ==
              doctest::Approx(reference::posterior_mean_quad(theta, d, H)).epsilon(1e-5));
        CHECK(post.mean_log() ==
              doctest::Approx(reference::posterior_mean_log_quad(theta, d, H)).epsilon(5e-5));
      }
    }
  }
}

TEST_CASE("cluster marginal loglik equals the lgamma form") {
  // log Gamma(a+d) - log Gamma(a) + a log a - (a+d) log(a+H), a = 1/theta
  for (double theta : {0.05, 0.3, 0.5, 1.0, 4.0}) {
    for (int d : {0, 1, 2, 5}) {
      for (double H : {0.01, 0.7, 3.0, 20.0}) {
        const double a = 1.0 / theta;
        const double want = std::lgamma(a + d) - std::lgamma(a) + a * std::log(a) -
                            (a + d) * std::log(a + H);
        CHECK(cluster_marginal_loglik(theta, d, H) == doctest::Approx(want).epsilon(1e-11));
      }
    }
  }
  // theta = 0 degenerates to -H
  CHECK(cluster_marginal_loglik(0.0, 3, 2.5) == doctest::Approx(-2.5));
}

TEST_CASE("cluster marginal loglik is continuous at theta -> 0") {
  const double at_zero = cluster_marginal_loglik(0.0, 2, 1.5);
  CHECK(cluster_marginal_loglik(1e-10, 2, 1.5) == doctest::Approx(at_zero).epsilon(1e-8));
  CHECK(cluster_marginal_loglik(1e-7, 2, 1.5) == doctest::Approx(at_zero).epsilon(1e-5));
}

TEST_CASE("log frailty density normalizes and has unit mean") {
  for (double theta : {0.25, 0.5, 2.0}) {
    CHECK(reference::density_integral_quad(theta) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(reference::density_mean_quad(theta) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("SignedLog round trip") {
  const SignedLog a{std::log(2.5), -1};
  CHECK(a.value() == doctest::Approx(-2.5));
  const SignedLog b{std::log(0.125), 1};
  CHECK(b.value() == doctest::Approx(0.125));
}

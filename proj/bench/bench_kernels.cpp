// Timing harness: optimized risk-set sweeps vs the plain reference kernels,
// plus the replicate loop at different thread counts.
#include <chrono>
#include <cstdio>
#include <functional>

#include "frailty/baseline.hpp"
#include "frailty/montecarlo.hpp"
#include "frailty/partial_likelihood.hpp"
#include "frailty/reference.hpp"
#include "frailty/simulate.hpp"

using namespace frailty;

namespace {

double time_once(const std::function<void()>& body, int reps) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) body();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count() / reps;
}

SimulationScenario scenario_of_size(int g, int m) {
  SimulationScenario s;
  s.name = "bench";
  s.n_clusters = g;
  s.cluster_size = m;
  s.alpha = 3.0;
  s.lambda = 0.007;
  s.beta = {1.0, -1.0, 0.5};
  s.theta = 0.5;
  s.censoring = 0.2;
  s.seed = 7;
  return s;
}

void bench_kernels(int g, int m) {
  const SimulationScenario s = scenario_of_size(g, m);
  const ClusteredSurvivalData data = generate(s).data;
  const RiskSetIndex idx = build_risk_sets(data);
  Eigen::VectorXd beta(3);
  beta << 0.8, -0.9, 0.4;
  const std::vector<double> offset(data.n(), 0.0);

  // keep results alive so the loops cannot be optimized out
  double sink = 0.0;

  const int reps = data.n() <= 1000 ? 50 : (data.n() <= 4000 ? 10 : 3);
  const double t_fast = time_once(
      [&] { sink += partial_loglik(data, idx, beta, offset, 2).loglik; }, reps);
  const double t_naive = time_once(
      [&] {
        sink += reference::partial_loglik_naive(data, beta, offset);
        sink += reference::partial_grad_naive(data, beta, offset).sum();
      },
      reps);
  const double t_breslow = time_once(
      [&] { sink += breslow(data, idx, beta, offset).cum.back(); }, reps);
  const double t_breslow_naive = time_once(
      [&] { sink += reference::breslow_naive(data, beta, offset).cum.back(); }, reps);

  std::printf("n=%-6d partial(value+grad+hess) %10.3f ms   naive(value+grad) %10.3f ms   x%.1f\n",
              data.n(), 1e3 * t_fast, 1e3 * t_naive, t_naive / t_fast);
  std::printf("n=%-6d breslow                  %10.3f ms   naive             %10.3f ms   x%.1f\n",
              data.n(), 1e3 * t_breslow, 1e3 * t_breslow_naive, t_breslow_naive / t_breslow);
  std::printf("  (checksum %.6g)\n", sink);
}

void bench_replicates() {
  const SimulationScenario s = scenario_of_size(40, 10);
  const std::vector<Method> methods = {Method::em, Method::ppl, Method::mml, Method::pfl};
  for (int threads : {1, 2, 4}) {
    const auto t0 = std::chrono::steady_clock::now();
    run_grid({s}, methods, 20, 0.95, 99, threads, nullptr);
    const auto t1 = std::chrono::steady_clock::now();
    std::printf("run_grid 20 reps x 4 methods, threads=%d: %.2f s\n", threads,
                std::chrono::duration<double>(t1 - t0).count());
  }
}

}  // namespace

int main() {
  std::printf("-- risk-set kernels, optimized vs reference --\n");
  bench_kernels(40, 10);
  bench_kernels(200, 10);
  bench_kernels(800, 10);
  std::printf("-- replicate loop scaling --\n");
  bench_replicates();
  return 0;
}

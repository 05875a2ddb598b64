#include "frailty/montecarlo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <nlohmann/json.hpp>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "frailty/inference.hpp"

namespace frailty {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double median_of(std::vector<double> v) {
  if (v.empty()) return kNan;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return (v.size() % 2 == 1) ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

ParamSummary summarize_param(const std::vector<double>& est, const std::vector<double>& se,
                             double truth) {
  ParamSummary s;
  s.truth = truth;
  s.n = static_cast<int>(est.size());
  if (s.n == 0) {
    s.mean = s.bias = s.mean_se = s.emp_se = s.median = s.median_se = s.mse = s.rmse = kNan;
    return s;
  }
  double acc = 0.0, acc_sq_err = 0.0;
  for (const double e : est) {
    acc += e;
    acc_sq_err += (e - truth) * (e - truth);
  }
  s.mean = acc / s.n;
  s.bias = s.mean - truth;
  s.mse = acc_sq_err / s.n;
  s.rmse = std::sqrt(s.mse);
  if (s.n >= 2) {
    double ss = 0.0;
    for (const double e : est) ss += (e - s.mean) * (e - s.mean);
    s.emp_se = std::sqrt(ss / (s.n - 1));
  } else {
    s.emp_se = kNan;
  }
  s.median = median_of(est);

  std::vector<double> finite_se;
  for (const double v : se)
    if (std::isfinite(v)) finite_se.push_back(v);
  s.n_se = static_cast<int>(finite_se.size());
  if (s.n_se > 0) {
    double a = 0.0;
    for (const double v : finite_se) a += v;
    s.mean_se = a / s.n_se;
    s.median_se = median_of(finite_se);
  } else {
    s.mean_se = s.median_se = kNan;
  }
  return s;
}

}  // namespace

MethodSummary aggregate(const std::vector<ReplicateEstimate>& records,
                        const std::vector<double>& beta_truth, double theta_truth, double level) {
  const int p = static_cast<int>(beta_truth.size());
  MethodSummary out;
  out.n_total = static_cast<int>(records.size());

  std::vector<std::vector<double>> best(p), bse(p);
  std::vector<double> test, tse;
  std::vector<int> beta_cover(p, 0), beta_n(p, 0);
  int t_wald_cover = 0, t_wald_n = 0, t_log_cover = 0, t_log_n = 0;
  double seconds = 0.0;

  for (const auto& r : records) {
    seconds += r.seconds;
    if (!r.converged) continue;
    ++out.n_converged;
    for (int j = 0; j < p; ++j) {
      best[j].push_back(r.beta[j]);
      bse[j].push_back(r.se_beta[j]);
      if (std::isfinite(r.se_beta[j])) {
        ++beta_n[j];
        if (ci_wald(r.beta[j], r.se_beta[j], level).covers(beta_truth[j])) ++beta_cover[j];
      }
    }
    test.push_back(r.theta);
    tse.push_back(r.se_theta);
    if (std::isfinite(r.se_theta)) {
      ++t_wald_n;
      if (ci_wald(r.theta, r.se_theta, level).covers(theta_truth)) ++t_wald_cover;
      if (r.theta > 0.0) {
        ++t_log_n;
        if (ci_log_scale(r.theta, r.se_theta, level).covers(theta_truth)) ++t_log_cover;
      }
    }
  }

  out.convergence_rate =
      out.n_total > 0 ? 100.0 * out.n_converged / out.n_total : kNan;
  out.mean_seconds = out.n_total > 0 ? seconds / out.n_total : kNan;
  for (int j = 0; j < p; ++j) {
    out.beta.push_back(summarize_param(best[j], bse[j], beta_truth[j]));
    out.beta_cover.push_back(CoverageSummary{
        beta_n[j] > 0 ? 100.0 * beta_cover[j] / beta_n[j] : kNan, beta_n[j]});
  }
  out.theta = summarize_param(test, tse, theta_truth);
  out.theta_cover_wald = CoverageSummary{
      t_wald_n > 0 ? 100.0 * t_wald_cover / t_wald_n : kNan, t_wald_n};
  out.theta_cover_log = CoverageSummary{
      t_log_n > 0 ? 100.0 * t_log_cover / t_log_n : kNan, t_log_n};
  return out;
}

StudyReport run_grid(const std::vector<SimulationScenario>& scenarios,
                     const std::vector<Method>& methods, int reps, double level,
                     std::uint64_t seed, int threads,
                     const std::function<void(const std::string&)>& progress) {
  if (reps < 1) throw std::invalid_argument("run_grid: reps must be >= 1");
  if (methods.empty()) throw std::invalid_argument("run_grid: no methods given");

  StudyReport report;
  report.seed = seed;
  report.reps = reps;
  report.level = level;
  report.methods = methods;

  const int nm = static_cast<int>(methods.size());
#ifdef _OPENMP
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#else
  (void)threads;
#endif

  for (std::size_t s_idx = 0; s_idx < scenarios.size(); ++s_idx) {
    const auto& scn = scenarios[s_idx];
    scn.validate();
    ScenarioStudy study;
    study.scenario = scn;
    study.censoring_rate = calibrate_censoring(scn);
    study.raw.assign(nm, std::vector<ReplicateEstimate>(reps));

    std::vector<double> achieved(reps, 0.0);

    // Each replicate writes only its own slots; aggregation below runs in
    // replicate order, so the report is independent of the schedule.
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(nt)
#endif
    for (int rep = 0; rep < reps; ++rep) {
      const auto sim = generate_replicate(scn, study.censoring_rate, seed,
                                          static_cast<std::uint64_t>(s_idx), rep);
      achieved[rep] = sim.achieved_censoring;
      for (int m = 0; m < nm; ++m) {
        ReplicateEstimate& slot = study.raw[m][rep];
        const auto t0 = std::chrono::steady_clock::now();
        try {
          const FrailtyFit f = fit(methods[m], sim.data);
          slot.converged = f.converged;
          slot.theta_boundary = f.theta_boundary;
          slot.beta = f.beta;
          slot.se_beta = f.se_beta;
          slot.theta = f.theta;
          slot.se_theta = f.se_theta;
          slot.loglik = f.loglik;
          slot.iterations = f.iterations;
        } catch (...) {
          slot.converged = false;
          slot.beta = Eigen::VectorXd::Constant(scn.beta.size(), kNan);
          slot.se_beta = slot.beta;
          slot.theta = kNan;
          slot.se_theta = kNan;
        }
        slot.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        slot.achieved_censoring = sim.achieved_censoring;
      }
    }

    double acc = 0.0;
    for (const double a : achieved) acc += a;
    study.mean_achieved_censoring = reps > 0 ? acc / reps : kNan;
    for (int m = 0; m < nm; ++m)
      study.methods.emplace_back(methods[m], aggregate(study.raw[m], scn.beta, scn.theta, level));

    report.scenarios.push_back(std::move(study));
    if (progress) progress(scn.name.empty() ? ("scenario " + std::to_string(s_idx)) : scn.name);
  }
  return report;
}

namespace {

nlohmann::ordered_json param_json(const ParamSummary& s) {
  nlohmann::ordered_json j;
  j["true"] = s.truth;
  j["mean"] = s.mean;
  j["bias"] = s.bias;
  j["mean_se"] = s.mean_se;
  j["emp_se"] = s.emp_se;
  j["median"] = s.median;
  j["median_se"] = s.median_se;
  j["mse"] = s.mse;
  j["rmse"] = s.rmse;
  j["n"] = s.n;
  j["n_se"] = s.n_se;
  return j;
}

nlohmann::ordered_json coverage_json(const CoverageSummary& c) {
  nlohmann::ordered_json j;
  j["rate"] = c.rate;
  j["n"] = c.n;
  return j;
}

}  // namespace

std::string report_json(const StudyReport& r) {
  nlohmann::ordered_json root;
  root["schema"] = 1;
  root["seed"] = r.seed;
  root["reps"] = r.reps;
  root["level"] = r.level;
  {
    auto arr = nlohmann::ordered_json::array();
    for (const auto m : r.methods) arr.push_back(method_name(m));
    root["methods"] = arr;
  }
  auto scen_arr = nlohmann::ordered_json::array();
  for (const auto& s : r.scenarios) {
    nlohmann::ordered_json js;
    js["name"] = s.scenario.name;
    js["g"] = s.scenario.n_clusters;
    js["cluster_size"] = s.scenario.cluster_size;
    js["n"] = s.scenario.n();
    js["alpha"] = s.scenario.alpha;
    js["lambda"] = s.scenario.lambda;
    js["beta"] = s.scenario.beta;
    js["theta"] = s.scenario.theta;
    js["censoring_target"] = s.scenario.censoring;
    js["censoring_rate"] = s.censoring_rate;
    js["censoring_achieved_mean"] = s.mean_achieved_censoring;
    nlohmann::ordered_json results;
    for (const auto& [method, sum] : s.methods) {
      nlohmann::ordered_json jm;
      jm["n_total"] = sum.n_total;
      jm["n_converged"] = sum.n_converged;
      jm["convergence_rate"] = sum.convergence_rate;
      nlohmann::ordered_json params;
      for (std::size_t j = 0; j < sum.beta.size(); ++j)
        params["beta" + std::to_string(j + 1)] = param_json(sum.beta[j]);
      params["theta"] = param_json(sum.theta);
      jm["params"] = params;
      nlohmann::ordered_json cov;
      for (std::size_t j = 0; j < sum.beta_cover.size(); ++j)
        cov["beta" + std::to_string(j + 1)] = coverage_json(sum.beta_cover[j]);
      cov["theta_wald"] = coverage_json(sum.theta_cover_wald);
      cov["theta_log"] = coverage_json(sum.theta_cover_log);
      jm["coverage"] = cov;
      results[method_name(method)] = jm;
    }
    js["results"] = results;
    scen_arr.push_back(js);
  }
  root["scenarios"] = scen_arr;
  return root.dump(2) + "\n";
}

std::string timing_json(const StudyReport& r) {
  nlohmann::ordered_json root;
  root["reps"] = r.reps;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& s : r.scenarios) {
    nlohmann::ordered_json js;
    js["name"] = s.scenario.name;
    nlohmann::ordered_json m;
    for (const auto& [method, sum] : s.methods) {
      nlohmann::ordered_json jm;
      jm["mean_seconds"] = sum.mean_seconds;
      jm["total_seconds"] = sum.mean_seconds * sum.n_total;
      m[method_name(method)] = jm;
    }
    js["methods"] = m;
    arr.push_back(js);
  }
  root["scenarios"] = arr;
  return root.dump(2) + "\n";
}

std::string report_text(const StudyReport& r) {
  std::ostringstream os;
  char buf[256];
  for (const auto& s : r.scenarios) {
    std::snprintf(buf, sizeof buf,
                  "scenario %s: g=%d, cluster_size=%d, n=%d, target censoring=%.0f%%\n",
                  s.scenario.name.c_str(), s.scenario.n_clusters, s.scenario.cluster_size,
                  s.scenario.n(), 100.0 * s.scenario.censoring);
    os << buf;
    std::snprintf(buf, sizeof buf,
                  "  censoring rate=%.6g, achieved=%.1f%%, replicates=%d\n",
                  s.censoring_rate, 100.0 * s.mean_achieved_censoring, r.reps);
    os << buf;
    std::snprintf(buf, sizeof buf, "  %-6s %-7s %8s %8s %8s %8s %8s %8s %8s %8s\n", "method",
                  "param", "true", "mean", "bias", "mean.se", "emp.se", "median", "mse", "rmse");
    os << buf;
    for (const auto& [method, sum] : s.methods) {
      auto row = [&](const char* name, const ParamSummary& p) {
        std::snprintf(buf, sizeof buf,
                      "  %-6s %-7s %8.3f %8.3f %8.3f %8.3f %8.3f %8.3f %8.3f %8.3f\n",
                      method_name(method), name, p.truth, p.mean, p.bias, p.mean_se, p.emp_se,
                      p.median, p.mse, p.rmse);
        os << buf;
      };
      for (std::size_t j = 0; j < sum.beta.size(); ++j)
        row(("beta" + std::to_string(j + 1)).c_str(), sum.beta[j]);
      row("theta", sum.theta);
      std::snprintf(buf, sizeof buf, "  %-6s conv=%5.1f%% (%d/%d)", method_name(method),
                    sum.convergence_rate, sum.n_converged, sum.n_total);
      os << buf;
      std::snprintf(buf, sizeof buf, "  cp(theta wald)=%5.2f%%  cp(theta log)=%5.2f%%",
                    sum.theta_cover_wald.rate, sum.theta_cover_log.rate);
      os << buf << "  cp(beta):";
      for (const auto& c : sum.beta_cover) {
        std::snprintf(buf, sizeof buf, " %5.2f%%", c.rate);
        os << buf;
      }
      os << "\n";
    }
    os << "\n";
  }
  return os.str();
}

std::string estimates_csv(const StudyReport& r) {
  int pmax = 0;
  for (const auto& s : r.scenarios) pmax = std::max(pmax, static_cast<int>(s.scenario.beta.size()));
  std::ostringstream os;
  os << "scenario,method,replicate,converged,theta_boundary,theta,se_theta,loglik,seconds,"
        "achieved_censoring";
  for (int j = 1; j <= pmax; ++j) os << ",beta" << j << ",se_beta" << j;
  os << "\n";
  char buf[64];
  auto num = [&](double v) {
    if (!std::isfinite(v)) return std::string("");
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& s : r.scenarios) {
    const int p = static_cast<int>(s.scenario.beta.size());
    for (std::size_t m = 0; m < s.methods.size(); ++m) {
      for (std::size_t rep = 0; rep < s.raw[m].size(); ++rep) {
        const auto& e = s.raw[m][rep];
        os << s.scenario.name << ',' << method_name(s.methods[m].first) << ',' << rep << ','
           << (e.converged ? 1 : 0) << ',' << (e.theta_boundary ? 1 : 0) << ',' << num(e.theta)
           << ',' << num(e.se_theta) << ',' << num(e.loglik) << ',' << num(e.seconds) << ','
           << num(e.achieved_censoring);
        for (int j = 0; j < pmax; ++j) {
          if (j < p && e.beta.size() == p) {
            os << ',' << num(e.beta[j]) << ',' << num(e.se_beta[j]);
          } else {
            os << ",,";
          }
        }
        os << "\n";
      }
    }
  }
  return os.str();
}

}  // namespace frailty

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "frailty/csv.hpp"
#include "frailty/estimators.hpp"
#include "frailty/inference.hpp"
#include "frailty/montecarlo.hpp"
#include "frailty/simulate.hpp"

namespace {

using namespace frailty;

struct FitArgs {
  std::string data_path;
  std::string method = "em";
  double level = 0.95;
  std::string json_path;
  FitConfig cfg;
};

struct SimArgs {
  std::string scenario_path;
  std::string out_path;
  std::string meta_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

struct BenchArgs {
  std::vector<std::string> scenario_paths;
  std::string methods = "em,ppl,mml,pfl";
  int reps = 200;
  std::uint64_t seed = 20260819;
  int threads = 0;
  double level = 0.95;
  std::string out_path;
  std::string timing_path;
  std::string estimates_path;
  bool quiet = false;
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

int run_simulate(const SimArgs& a) {
  SimulationScenario s = scenario_from_json_file(a.scenario_path);
  if (a.seed_set) s.seed = a.seed;
  const SimulatedData sim = generate(s);
  write_csv(sim.data, a.out_path);
  if (!a.meta_path.empty()) {
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(scenario_to_json(s));
    j["censoring_rate"] = sim.censoring_rate;
    j["achieved_censoring"] = sim.achieved_censoring;
    j["frailty"] = sim.frailty;
    write_file(a.meta_path, j.dump(2) + "\n");
  }
  std::printf("wrote %d subjects in %d clusters to %s (censored %.1f%%, rate %.6g)\n",
              sim.data.n(), sim.data.n_clusters, a.out_path.c_str(),
              100.0 * sim.achieved_censoring, sim.censoring_rate);
  return 0;
}

std::string ci_str(const ConfidenceInterval& ci) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "[%9.4f, %9.4f]", ci.lo, ci.hi);
  return buf;
}

int run_fit(const FitArgs& a) {
  const Method method = parse_method(a.method);
  const ClusteredSurvivalData data = load_csv(a.data_path);
  const FrailtyFit f = fit(method, data, a.cfg);

  if (a.method == "hl") {
    std::printf("method: hl is an alias for ppl; fitting by penalized partial likelihood\n");
  } else {
    std::printf("method: %s\n", method_name(method));
  }
  std::printf("subjects: %d   clusters: %d   events: %d\n", data.n(), data.n_clusters,
              data.n_events());
  std::printf("converged: %s (%d iterations)   loglik: %.6f\n", f.converged ? "yes" : "no",
              f.iterations, f.loglik);

  std::printf("%-8s %10s %10s  %s\n", "param", "estimate", "se", "ci");
  for (int j = 0; j < f.beta.size(); ++j) {
    const bool ok = std::isfinite(f.se_beta[j]);
    std::printf("beta%-4d %10.4f %10.4f  %s\n", j + 1, f.beta[j], f.se_beta[j],
                ok ? ci_str(ci_wald(f.beta[j], f.se_beta[j], a.level)).c_str() : "-");
  }
  if (std::isfinite(f.se_theta)) {
    std::printf("theta    %10.4f %10.4f  wald %s  log %s\n", f.theta, f.se_theta,
                ci_str(ci_wald(f.theta, f.se_theta, a.level)).c_str(),
                ci_str(ci_log_scale(f.theta, f.se_theta, a.level)).c_str());
  } else {
    std::printf("theta    %10.4f %10s\n", f.theta, "-");
  }
  if (const auto* wb = std::get_if<WeibullBaseline>(&f.baseline)) {
    std::printf("baseline: weibull alpha=%.6g lambda=%.6g\n", wb->alpha, wb->lambda);
  } else {
    const auto& h0 = std::get<StepCumulativeHazard>(f.baseline);
    std::printf("baseline: step cumulative hazard with %zu jumps\n", h0.jumps.size());
  }

  if (!a.json_path.empty()) {
    nlohmann::ordered_json j;
    j["method"] = method_name(method);
    j["level"] = a.level;
    j["converged"] = f.converged;
    j["iterations"] = f.iterations;
    j["loglik"] = f.loglik;
    j["beta"] = std::vector<double>(f.beta.data(), f.beta.data() + f.beta.size());
    j["se_beta"] = std::vector<double>(f.se_beta.data(), f.se_beta.data() + f.se_beta.size());
    j["theta"] = f.theta;
    j["se_theta"] = f.se_theta;
    if (std::isfinite(f.se_theta)) {
      const auto w = ci_wald(f.theta, f.se_theta, a.level);
      const auto l = ci_log_scale(f.theta, f.se_theta, a.level);
      j["theta_ci_wald"] = {w.lo, w.hi};
      j["theta_ci_log"] = {l.lo, l.hi};
    }
    if (const auto* wb = std::get_if<WeibullBaseline>(&f.baseline)) {
      j["baseline"] = {{"type", "weibull"}, {"alpha", wb->alpha}, {"lambda", wb->lambda}};
    } else {
      const auto& h0 = std::get<StepCumulativeHazard>(f.baseline);
      j["baseline"] = {{"type", "step"}, {"times", h0.times}, {"jumps", h0.jumps}};
    }
    j["frailty"] = f.frailty;
    j["message"] = f.message;
    write_file(a.json_path, j.dump(2) + "\n");
  }

  if (!f.converged) {
    std::fprintf(stderr, "fit did not converge: %s\n",
                 f.message.empty() ? "iteration limit or tolerance not met" : f.message.c_str());
    return 2;
  }
  return 0;
}

int run_benchmark(const BenchArgs& a) {
  if (a.reps < 1) {
    std::fprintf(stderr, "reps must be >= 1\n");
    return 1;
  }
  std::vector<SimulationScenario> scenarios;
  for (const auto& path : a.scenario_paths) scenarios.push_back(scenario_from_json_file(path));

  std::vector<Method> methods;
  std::stringstream ss(a.methods);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) methods.push_back(parse_method(tok));
  }
  if (methods.empty()) {
    std::fprintf(stderr, "no methods given\n");
    return 1;
  }

  const auto progress = [&](const std::string& name) {
    if (!a.quiet) std::fprintf(stderr, "done: %s\n", name.c_str());
  };
  const StudyReport report =
      run_grid(scenarios, methods, a.reps, a.level, a.seed, a.threads, progress);

  std::fputs(report_text(report).c_str(), stdout);
  if (!a.out_path.empty()) write_file(a.out_path, report_json(report));
  if (!a.timing_path.empty()) write_file(a.timing_path, timing_json(report));
  if (!a.estimates_path.empty()) write_file(a.estimates_path, estimates_csv(report));
  return 0;
}

int run_report(const std::string& in_path) {
  std::ifstream in(in_path);
  if (!in) {
    std::fprintf(stderr, "cannot open '%s'\n", in_path.c_str());
    return 1;
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "invalid report JSON: %s\n", e.what());
    return 1;
  }
  char buf[256];
  try {
    std::printf("study: %d replicates, level %.2f, seed %llu\n", j.at("reps").get<int>(),
                j.at("level").get<double>(),
                static_cast<unsigned long long>(j.at("seed").get<std::uint64_t>()));
    for (const auto& s : j.at("scenarios")) {
      std::snprintf(buf, sizeof buf, "scenario %s: g=%d, cluster_size=%d, n=%d\n",
                    s.at("name").get<std::string>().c_str(), s.at("g").get<int>(),
                    s.at("cluster_size").get<int>(), s.at("n").get<int>());
      std::fputs(buf, stdout);
      std::snprintf(buf, sizeof buf, "  %-6s %-7s %8s %8s %8s %8s %8s %8s\n", "method", "param",
                    "true", "mean", "bias", "mean_se", "emp_se", "rmse");
      std::fputs(buf, stdout);
      for (const auto& [mname, res] : s.at("results").items()) {
        for (const auto& [pname, ps] : res.at("params").items()) {
          auto num = [&](const char* key) {
            return ps.at(key).is_null() ? std::nan("") : ps.at(key).get<double>();
          };
          std::snprintf(buf, sizeof buf, "  %-6s %-7s %8.3f %8.3f %8.3f %8.3f %8.3f %8.3f\n",
                        mname.c_str(), pname.c_str(), num("true"), num("mean"), num("bias"),
                        num("mean_se"), num("emp_se"), num("rmse"));
          std::fputs(buf, stdout);
        }
        const auto& cov = res.at("coverage");
        auto rate = [&](const char* key) {
          return cov.at(key).at("rate").is_null() ? std::nan("")
                                                  : cov.at(key).at("rate").get<double>();
        };
        std::snprintf(buf, sizeof buf,
                      "  %-6s convergence %.1f%%  cp(theta wald) %.2f%%  cp(theta log) %.2f%%\n",
                      mname.c_str(), res.at("convergence_rate").get<double>(), rate("theta_wald"),
                      rate("theta_log"));
        std::fputs(buf, stdout);
      }
      std::fputs("\n", stdout);
    }
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "report JSON missing fields: %s\n", e.what());
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shared gamma frailty survival models: simulate, fit, compare"};
  app.require_subcommand(1);

  SimArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "draw one dataset from a scenario file");
  c_sim->add_option("--scenario", sim.scenario_path, "scenario JSON file")->required();
  c_sim->add_option("--out", sim.out_path, "output CSV path")->required();
  c_sim->add_option("--meta", sim.meta_path, "optional JSON sidecar (rate, frailties)");
  c_sim->add_option("--seed", sim.seed, "override the scenario seed")
      ->each([&](const std::string&) { sim.seed_set = true; });

  FitArgs fit_args;
  auto* c_fit = app.add_subcommand("fit", "fit one model to a CSV dataset");
  c_fit->add_option("--data", fit_args.data_path, "CSV file: cluster,time,status,x1..xp")
      ->required();
  c_fit->add_option("--method", fit_args.method, "em | ppl | mml | pfl | hl (alias of ppl)")
      ->required();
  c_fit->add_option("--level", fit_args.level, "confidence level, default 0.95");
  c_fit->add_option("--json", fit_args.json_path, "write the fit as JSON");
  c_fit->add_option("--max-outer", fit_args.cfg.max_outer_iters, "outer iteration cap");
  c_fit->add_option("--max-inner", fit_args.cfg.max_inner_iters, "inner iteration cap");
  c_fit->add_option("--tol-loglik", fit_args.cfg.tol_loglik, "relative loglik tolerance");
  c_fit->add_option("--tol-param", fit_args.cfg.tol_param, "parameter change tolerance");
  c_fit->add_option("--theta-init", fit_args.cfg.theta_init, "starting frailty variance");

  BenchArgs bench;
  auto* c_bench = app.add_subcommand("benchmark", "replicate study across scenarios and methods");
  c_bench->add_option("--scenario", bench.scenario_paths, "scenario JSON file(s)")
      ->required()
      ->expected(-1);
  c_bench->add_option("--methods", bench.methods, "comma list, default em,ppl,mml,pfl");
  c_bench->add_option("--reps", bench.reps, "replicates per scenario (default 200)");
  c_bench->add_option("--seed", bench.seed, "study seed (default 20260819)");
  c_bench->add_option("--threads", bench.threads, "worker threads (0 = all available)");
  c_bench->add_option("--level", bench.level, "confidence level, default 0.95");
  c_bench->add_option("--out", bench.out_path, "write deterministic summary JSON");
  c_bench->add_option("--timing-out", bench.timing_path, "write wall-time sidecar JSON");
  c_bench->add_option("--dump-estimates", bench.estimates_path, "write per-replicate CSV");
  c_bench->add_flag("--quiet", bench.quiet, "suppress progress lines");

  std::string report_in;
  auto* c_report = app.add_subcommand("report", "render tables from a summary JSON");
  c_report->add_option("--in", report_in, "report JSON produced by benchmark --out")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (c_sim->parsed()) return run_simulate(sim);
    if (c_fit->parsed()) {
      if (!(fit_args.level > 0.0 && fit_args.level < 1.0)) {
        std::fprintf(stderr, "level must lie in (0,1)\n");
        return 1;
      }
      return run_fit(fit_args);
    }
    if (c_bench->parsed()) return run_benchmark(bench);
    if (c_report->parsed()) return run_report(report_in);
  } catch (const CsvError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

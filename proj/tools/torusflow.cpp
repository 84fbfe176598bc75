#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "torusflow/config.hpp"
#include "torusflow/errors.hpp"
#include "torusflow/report.hpp"
#include "torusflow/runner.hpp"
#include "torusflow/sweep.hpp"

namespace tf = torusflow;

namespace {

enum Exit { ok = 0, config_error = 2, numerical_failure = 3, blowup = 4, envelope_violation = 5 };

int print_config_error(const tf::ConfigError& e) {
  std::cerr << "configuration error:\n";
  for (const auto& v : e.violations()) std::cerr << "  " << v << '\n';
  return config_error;
}

int exit_for(tf::RunStatus s) {
  switch (s) {
    case tf::RunStatus::completed: return ok;
    case tf::RunStatus::blowup_detected: return blowup;
    case tf::RunStatus::numerical_failure: return numerical_failure;
  }
  return numerical_failure;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
  tf::RunConfig cfg = tf::load_config(config_path);
  tf::RunOptions opts;
  if (!out_dir.empty()) opts.directory = out_dir;
  const tf::RunResult res = tf::execute_run(cfg, opts);
  const auto& primary = res.theorems.front();
  std::printf("status: %s at t = %.17g\n", tf::to_string(res.outcome.status).c_str(), res.outcome.final_time);
  std::printf("%s: margin %.17g, lambda %.17g, %s\n", tf::to_string(primary.theorem_id).c_str(), primary.margin,
              primary.lambda, primary.satisfied ? "satisfied" : "not satisfied");
  if (res.envelope)
    std::printf("envelope (%s): %s, worst ratio %.17g\n", tf::to_string(tf::envelope_norm(primary.theorem_id)).c_str(),
                res.envelope->passed ? "passed" : "violated", res.envelope->worst_ratio);
  if (!res.outcome.message.empty()) std::printf("%s\n", res.outcome.message.c_str());
  return exit_for(res.outcome.status);
}

int cmd_check(const std::string& config_path) {
  const tf::RunConfig cfg = tf::load_config(config_path);
  std::cout << tf::check_report(cfg).dump(2) << '\n';
  return ok;
}

int cmd_sweep(const std::string& config_path, const std::string& axes_path, const std::string& out_dir,
              int threads) {
  const tf::RunConfig base = tf::load_config(config_path);
  tf::SweepPlan plan = tf::load_sweep_plan(axes_path);
  if (!out_dir.empty()) plan.options.directory = out_dir;
  if (threads >= 0) plan.options.threads = static_cast<unsigned>(threads);
  const tf::SweepSummary summary = tf::run_sweep(base, plan.axes, plan.options);
  std::filesystem::create_directories(plan.options.directory);
  const auto csv = plan.options.directory / "summary.csv";
  tf::write_sweep_csv(csv, summary);
  std::size_t failed = 0;
  for (const auto& r : summary.rows) failed += r.error.empty() ? 0 : 1;
  std::printf("%zu runs, %zu failed; summary in %s\n", summary.rows.size(), failed, csv.string().c_str());
  return ok;
}

int cmd_verify(const std::string& trace_path, double lambda, const std::string& norm, double tol) {
  const tf::NormTrace trace = tf::read_trace_csv(std::filesystem::path(trace_path));
  if (trace.empty()) throw tf::FormatError("trace has no rows");
  const tf::EnvelopeVerdict v = tf::verify_decay_envelope(trace, tf::norm_index_from_string(norm), lambda, tol);
  std::cout << tf::to_json(v).dump(2) << '\n';
  return v.passed ? ok : envelope_violation;
}

int cmd_convergence(const std::string& config_path, int levels) {
  const tf::RunConfig cfg = tf::load_config(config_path);
  tf::RunOptions opts;
  opts.write_outputs = false;
  std::vector<tf::SpectralField> finals;
  std::vector<double> dts;
  for (int l = 0; l < levels; ++l) {
    tf::RunConfig c = cfg;
    c.stepper.dt = cfg.stepper.dt / std::ldexp(1.0, l);
    c.stepper.record_every = static_cast<int>(std::lround(c.stepper.t_end / c.stepper.dt)) + 1;
    const tf::RunResult res = tf::execute_run(c, opts);
    if (res.outcome.status != tf::RunStatus::completed) {
      std::cerr << "level " << l << " (dt = " << c.stepper.dt << "): " << tf::to_string(res.outcome.status) << '\n';
      return exit_for(res.outcome.status);
    }
    finals.push_back(res.outcome.final_field);
    dts.push_back(c.stepper.dt);
  }
  std::printf("%-24s %-24s %-12s\n", "dt", "a0(u_dt - u_dt/2)", "order");
  double prev = 0.0;
  for (int l = 0; l + 1 < levels; ++l) {
    const double diff = tf::wiener_norm(finals[l] - finals[l + 1], 0.0);
    const double order = l > 0 && diff > 0 ? std::log2(prev / diff) : NAN;
    std::printf("%-24.17g %-24.17g %-12.4g\n", dts[l], diff, order);
    prev = diff;
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier-Galerkin simulator for fourth-order parabolic equations on the torus"};
  app.require_subcommand(1);

  std::string config, axes, trace, out_dir, norm = "a2";
  double lambda = 0.0, tol = 1e-6;
  int levels = 4, threads = -1;

  auto* sim = app.add_subcommand("simulate", "run a configuration and write trace, report and snapshots");
  sim->add_option("config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);
  sim->add_option("-o,--output-dir", out_dir, "override outputs.directory");

  auto* chk = app.add_subcommand("check", "print theorem reports for the initial data");
  chk->add_option("config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);

  auto* swp = app.add_subcommand("sweep", "run the Cartesian product of parameter axes");
  swp->add_option("config", config, "base JSON run configuration")->required()->check(CLI::ExistingFile);
  swp->add_option("axes", axes, "JSON sweep axes")->required()->check(CLI::ExistingFile);
  swp->add_option("-o,--output-dir", out_dir, "override the sweep directory");
  swp->add_option("-j,--threads", threads, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);

  auto* ver = app.add_subcommand("verify", "check a trace against exp(-lambda t) decay");
  ver->add_option("trace", trace, "trace CSV")->required()->check(CLI::ExistingFile);
  ver->add_option("--lambda", lambda, "decay rate")->required();
  ver->add_option("--norm", norm, "a0, a2, a4 or a6")->check(CLI::IsMember({"a0", "a2", "a4", "a6"}));
  ver->add_option("--tol", tol, "relative slack")->check(CLI::NonNegativeNumber);

  auto* conv = app.add_subcommand("convergence", "dt-refinement study of the final state");
  conv->add_option("config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);
  conv->add_option("--levels", levels, "number of dt halvings plus one")->check(CLI::Range(2, 12));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : config_error;
  }

  try {
    if (*sim) return cmd_simulate(config, out_dir);
    if (*chk) return cmd_check(config);
    if (*swp) return cmd_sweep(config, axes, out_dir, threads);
    if (*ver) return cmd_verify(trace, lambda, norm, tol);
    if (*conv) return cmd_convergence(config, levels);
  } catch (const tf::ConfigError& e) {
    return print_config_error(e);
  } catch (const tf::FormatError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return config_error;
  } catch (const tf::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return numerical_failure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return ok;
}

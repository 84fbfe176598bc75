#ifndef TORUSFLOW_RUNNER_HPP
#define TORUSFLOW_RUNNER_HPP

#include <filesystem>
#include <optional>
#include <vector>

#include <json.hpp>

#include "torusflow/config.hpp"
#include "torusflow/integrator.hpp"
#include "torusflow/theory.hpp"

namespace torusflow {

/// Theorem reports for the initial state, primary theorem first.
std::vector<TheoremReport> applicable_theorems(const RunConfig& cfg, const SpectralField& initial);

/// The theorem whose envelope a run is checked against.
TheoremId primary_theorem(const RunConfig& cfg);

/// Norm bounded by the decay estimate of a theorem.
NormIndex envelope_norm(TheoremId id);

struct RunResult {
  RunOutcome outcome;
  std::vector<TheoremReport> theorems;
  std::optional<EnvelopeVerdict> envelope;  // set when the primary theorem's condition holds
  NormVector initial_norms;
  nlohmann::json report;
};

struct RunOptions {
  bool write_outputs = true;
  /// Overrides cfg.outputs.directory when set.
  std::optional<std::filesystem::path> directory;
};

/// Builds the initial state, checks the theorems, integrates and writes the
/// trace CSV, JSON report, checkpoints and final snapshot. Throws ConfigError
/// or FormatError for bad inputs; numerical trouble ends up in the outcome.
RunResult execute_run(const RunConfig& cfg, const RunOptions& options = {});

/// Theorem reports only (no time stepping), as JSON.
nlohmann::json check_report(const RunConfig& cfg);

}  // namespace torusflow

#endif  // TORUSFLOW_RUNNER_HPP

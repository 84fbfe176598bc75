#ifndef TORUSFLOW_SWEEP_HPP
#define TORUSFLOW_SWEEP_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "torusflow/config.hpp"
#include "torusflow/runner.hpp"

namespace torusflow {

/// Dotted path into the JSON form of a RunConfig ("params.K1",
/// "initial_data.scale_to.value") and the values it takes.
struct SweepAxis {
  std::string path;
  std::vector<nlohmann::json> values;
};

struct SweepOptions {
  std::filesystem::path directory = "sweep";
  std::size_t max_runs = 1000;
  unsigned threads = 0;  // 0: hardware concurrency
  bool write_outputs = true;
};

struct SweepPlan {
  std::vector<SweepAxis> axes;
  SweepOptions options;
};

/// {"axes": [{"path": ..., "values": [...]}], "max_runs": N, "threads": T}
SweepPlan parse_sweep_plan(const nlohmann::json& j);
SweepPlan load_sweep_plan(const std::filesystem::path& path);

struct SweepRow {
  std::size_t index = 0;
  std::vector<nlohmann::json> values;  // one per axis
  std::optional<TheoremReport> theorem;
  std::optional<RunStatus> status;
  std::optional<EnvelopeVerdict> envelope;
  std::optional<TraceRow> final_row;
  std::string error;  // empty on success
};

struct SweepSummary {
  std::vector<std::string> axis_paths;
  std::vector<SweepRow> rows;
};

/// One run per point of the Cartesian product, each in <directory>/run_XXXX.
/// Throws ConfigError for unknown axis paths or when the product exceeds max_runs;
/// failures of individual runs are recorded in their rows.
SweepSummary run_sweep(const RunConfig& base, const std::vector<SweepAxis>& axes, const SweepOptions& options);

/// index, one column per axis, theorem_id, margin, lambda, satisfied, status,
/// envelope_passed, worst_ratio, final_t, a0, a2, a4, a6, error.
void write_sweep_csv(std::ostream& os, const SweepSummary& summary);
void write_sweep_csv(const std::filesystem::path& path, const SweepSummary& summary);

}  // namespace torusflow

#endif  // TORUSFLOW_SWEEP_HPP

#ifndef TORUSFLOW_CONFIG_HPP
#define TORUSFLOW_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "torusflow/integrator.hpp"
#include "torusflow/models.hpp"
#include "torusflow/theory.hpp"

namespace torusflow {

struct ModeEntry {
  int k1 = 0;
  int k2 = 0;
  double re = 0.0;
  double im = 0.0;
  bool operator==(const ModeEntry&) const = default;
};

struct ScaleTarget {
  NormIndex norm = NormIndex::a0;
  double value = 0.0;
  bool operator==(const ScaleTarget&) const = default;
};

/// How the initial state is built. For the thin-film model the data describe
/// u0, whose mean must be 1; the simulated variable is v0 = u0 - 1.
struct InitialDataSpec {
  enum class Kind { modes, random_decay, snapshot };

  Kind kind = Kind::random_decay;
  std::vector<ModeEntry> modes;      // kind == modes
  double amplitude = 0.1;            // kind == random_decay: |u^(k)| = amplitude |k|^-decay
  double decay = 3.0;
  std::string path;                  // kind == snapshot
  bool zero_mean = true;
  std::optional<ScaleTarget> scale_to;  // rescale the simulated variable to this norm

  bool operator==(const InitialDataSpec&) const = default;
};

struct OutputSpec {
  std::string directory = ".";
  std::string trace_csv = "trace.csv";
  std::string report_json = "report.json";
  std::string final_snapshot = "final_snapshot.txt";
  long checkpoint_every = 0;  // steps; 0 disables checkpoints

  bool operator==(const OutputSpec&) const = default;
};

struct RunConfig {
  ModelParams params = EpitaxialParams{};
  int n = 16;
  InitialDataSpec initial_data;
  StepperConfig stepper;
  OutputSpec outputs;
  std::uint64_t seed = 0;
  double envelope_tol = 1e-6;
  std::optional<TheoremId> theorem;

  Model model() const { return model_of(params); }
  bool operator==(const RunConfig&) const = default;
};

/// Validates everything; unknown keys are errors. Throws ConfigError with one
/// message per violation (or a parse message for malformed JSON).
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

/// Full form with every default written out; parse_config(to_json(c)) == c.
nlohmann::json to_json(const RunConfig& c);

/// The simulated state (u, or v = u0 - 1 for the thin film) on cutoff n.
/// Throws ConfigError for data inconsistent with the spec, FormatError for a bad snapshot.
SpectralField generate_initial(const InitialDataSpec& spec, int n, std::uint64_t seed, Model model);

/// Counter-based uniform deviate in [0, 1) for (seed, k1, k2).
double counter_uniform(std::uint64_t seed, int k1, int k2);

}  // namespace torusflow

#endif  // TORUSFLOW_CONFIG_HPP

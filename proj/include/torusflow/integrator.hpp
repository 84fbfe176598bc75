#ifndef TORUSFLOW_INTEGRATOR_HPP
#define TORUSFLOW_INTEGRATOR_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "torusflow/models.hpp"
#include "torusflow/spectral_field.hpp"

namespace torusflow {

/// IMEX1: implicit Euler on the linear symbol, explicit Euler on the rest.
/// ETD2: second-order exponential Runge-Kutta (Cox-Matthews ETDRK2).
enum class Scheme { imex1, etd2 };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct StepperConfig {
  Scheme scheme = Scheme::etd2;
  double dt = 1e-3;
  double t_end = 1.0;
  int record_every = 1;
  /// A0 cap; when unset, 1e6 * max(initial A0, 1).
  std::optional<double> blowup_threshold;

  /// Throws ConfigError. `initial_a0` is checked against the threshold.
  void validate(double initial_a0) const;
  double threshold_for(double initial_a0) const;
  bool operator==(const StepperConfig&) const = default;
};

struct TraceRow {
  double t = 0.0;
  double a0 = 0.0;
  double a2 = 0.0;
  double a4 = 0.0;
  double a6 = 0.0;
  double mean = 0.0;
  double dt = 0.0;
};

/// Norm samples along a run; rows strictly increasing in t.
class NormTrace {
 public:
  /// std::invalid_argument if t does not increase or a norm is non-finite.
  void push(const TraceRow& row);
  const std::vector<TraceRow>& rows() const { return rows_; }
  bool empty() const { return rows_.empty(); }
  std::size_t size() const { return rows_.size(); }

 private:
  std::vector<TraceRow> rows_;
};

enum class RunStatus { completed, blowup_detected, numerical_failure };
std::string to_string(RunStatus s);

struct RunOutcome {
  RunStatus status = RunStatus::completed;
  double final_time = 0.0;
  NormTrace trace;
  SpectralField final_field{1};
  std::string message;
};

/// Per-step precomputed linear factors; reuse across steps with fixed dt.
class Stepper {
 public:
  Stepper(ModelParams params, ModeSet modes, double dt, Scheme scheme);

  /// One step; the k = 0 coefficient is carried over unchanged.
  /// Throws NumericalError on non-finite results.
  SpectralField advance(const SpectralField& state) const;

  double dt() const { return dt_; }

 private:
  ModelParams params_;
  ModeSet modes_;
  double dt_;
  Scheme scheme_;
  std::vector<double> propagator_;  // ETD2: exp(L h);  IMEX1: 1 / (1 - h L)
  std::vector<double> phi1_;        // ETD2: h phi1(L h); IMEX1: h / (1 - h L)
  std::vector<double> phi2_;        // ETD2: h phi2(L h)
};

SpectralField step(const SpectralField& state, double dt, const ModelParams& params, Scheme scheme);

struct SimulationHooks {
  /// Added to the k = 0 coefficient when recording the mean (thin film: mean of u).
  double mean_offset = 0.0;
  /// Called with (t, state) at t = 0 and after every step.
  std::function<void(double, const SpectralField&)> on_step;
  /// Called with (step index, t, state) every `checkpoint_every` steps (0 = never).
  long checkpoint_every = 0;
  std::function<void(long, double, const SpectralField&)> on_checkpoint;
};

/// Fixed-step march of the Galerkin system from u0 to t_end.
RunOutcome simulate(const SpectralField& u0, const ModelParams& params, const StepperConfig& stepper,
                    const SimulationHooks& hooks = {});

struct BlowupEvent {
  double t = 0.0;
  double norm = 0.0;
  std::size_t row = 0;
};

/// First row whose a0 exceeds the threshold.
std::optional<BlowupEvent> detect_blowup(const NormTrace& trace, double threshold);

/// Trace row for a state at time t.
TraceRow trace_row(double t, const SpectralField& state, double mean_offset, double dt);

}  // namespace torusflow

#endif  // TORUSFLOW_INTEGRATOR_HPP

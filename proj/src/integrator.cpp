#include "torusflow/integrator.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "torusflow/errors.hpp"

namespace torusflow {

namespace {

// phi1(z) = (e^z - 1) / z
double phi1(double z) {
  if (z == 0.0) return 1.0;
  return std::expm1(z) / z;
}

// phi2(z) = (e^z - 1 - z) / z^2, by series near 0 where the closed form cancels.
double phi2(double z) {
  if (std::abs(z) < 0.5) {
    double term = 0.5;  // z^j / (j + 2)!
    double sum = term;
    for (int j = 1; j < 20; ++j) {
      term *= z / (j + 2);
      sum += term;
    }
    return sum;
  }
  return (std::expm1(z) - z) / (z * z);
}

void require_finite(const std::vector<Complex>& c) {
  for (const auto& v : c)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw NumericalError("time step produced non-finite values");
}

}  // namespace

std::string to_string(Scheme s) { return s == Scheme::etd2 ? "ETD2" : "IMEX1"; }

Scheme scheme_from_string(const std::string& s) {
  if (s == "ETD2" || s == "etd2") return Scheme::etd2;
  if (s == "IMEX1" || s == "imex1") return Scheme::imex1;
  throw std::invalid_argument("unknown scheme '" + s + "' (expected ETD2 or IMEX1)");
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::blowup_detected: return "blowup_detected";
    case RunStatus::numerical_failure: return "numerical_failure";
  }
  return "unknown";
}

double StepperConfig::threshold_for(double initial_a0) const {
  return blowup_threshold ? *blowup_threshold : 1e6 * std::max(initial_a0, 1.0);
}

void StepperConfig::validate(double initial_a0) const {
  std::vector<std::string> bad;
  if (!(dt > 0) || !std::isfinite(dt)) bad.emplace_back("stepper.dt: requires dt > 0");
  if (!(t_end >= dt) || !std::isfinite(t_end)) bad.emplace_back("stepper.t_end: requires t_end >= dt");
  if (record_every < 1) bad.emplace_back("stepper.record_every: requires a positive integer");
  if (blowup_threshold && !(*blowup_threshold > initial_a0))
    bad.emplace_back("stepper.blowup_threshold: must exceed the initial A0 norm");
  if (!bad.empty()) throw ConfigError(std::move(bad));
}

void NormTrace::push(const TraceRow& row) {
  if (!rows_.empty() && !(row.t > rows_.back().t)) throw std::invalid_argument("trace times must increase strictly");
  for (double v : {row.t, row.a0, row.a2, row.a4, row.a6, row.mean})
    if (!std::isfinite(v)) throw std::invalid_argument("trace entries must be finite");
  rows_.push_back(row);
}

Stepper::Stepper(ModelParams params, ModeSet modes, double dt, Scheme scheme)
    : params_(std::move(params)), modes_(modes), dt_(dt), scheme_(scheme) {
  if (!(dt > 0)) throw std::invalid_argument("dt must be positive");
  const int n = modes.cutoff();
  propagator_.assign(modes.size(), 1.0);
  phi1_.assign(modes.size(), 0.0);
  phi2_.assign(modes.size(), 0.0);
  for (int k1 = -n; k1 <= n; ++k1)
    for (int k2 = -n; k2 <= n; ++k2) {
      if (k1 == 0 && k2 == 0) continue;  // frozen mean
      const std::size_t i = modes.index(k1, k2);
      const double L = linear_symbol(params_, k1, k2);
      const double z = L * dt;
      if (scheme == Scheme::etd2) {
        propagator_[i] = std::exp(z);
        phi1_[i] = dt * phi1(z);
        phi2_[i] = dt * phi2(z);
      } else {
        propagator_[i] = 1.0 / (1.0 - z);
        phi1_[i] = dt / (1.0 - z);
      }
    }
}

SpectralField Stepper::advance(const SpectralField& state) const {
  if (!(state.modes() == modes_)) throw std::invalid_argument("state mode set does not match the stepper");
  const auto u = state.coefficients();
  const SpectralField Nu = nonlinear_terms(state, params_);
  const auto nu = Nu.coefficients();
  std::vector<Complex> next(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) next[i] = propagator_[i] * u[i] + phi1_[i] * nu[i];
  if (scheme_ == Scheme::etd2) {
    require_finite(next);
    const SpectralField a = SpectralField::hermitian_part(modes_, next);
    const SpectralField Na = nonlinear_terms(a, params_);
    const auto na = Na.coefficients();
    for (std::size_t i = 0; i < u.size(); ++i) next[i] += phi2_[i] * (na[i] - nu[i]);
  }
  require_finite(next);
  return SpectralField::hermitian_part(modes_, std::move(next));
}

SpectralField step(const SpectralField& state, double dt, const ModelParams& params, Scheme scheme) {
  return Stepper(params, state.modes(), dt, scheme).advance(state);
}

TraceRow trace_row(double t, const SpectralField& state, double mean_offset, double dt) {
  const NormVector nv = norms(state);
  return TraceRow{t, nv.a0, nv.a2, nv.a4, nv.a6, mean_offset + state.mean(), dt};
}

RunOutcome simulate(const SpectralField& u0, const ModelParams& params, const StepperConfig& cfg,
                    const SimulationHooks& hooks) {
  const double a0_initial = norms(u0).a0;
  cfg.validate(a0_initial);
  if (model_of(params) == Model::thinfilm && std::abs(u0(0, 0)) >= 1e-12)
    throw std::invalid_argument("simulate: thin-film state v must have zero mean");

  const double threshold = cfg.threshold_for(a0_initial);
  const long steps = std::max(1L, std::lround(cfg.t_end / cfg.dt));
  const Stepper stepper(params, u0.modes(), cfg.dt, cfg.scheme);

  RunOutcome out;
  out.final_field = u0;
  out.trace.push(trace_row(0.0, u0, hooks.mean_offset, cfg.dt));
  if (hooks.on_step) hooks.on_step(0.0, u0);

  SpectralField state = u0;
  for (long s = 1; s <= steps; ++s) {
    const double t = static_cast<double>(s) * cfg.dt;
    try {
      state = stepper.advance(state);
    } catch (const NumericalError& e) {
      out.status = RunStatus::numerical_failure;
      out.final_time = static_cast<double>(s - 1) * cfg.dt;
      out.message = e.what();
      return out;
    }
    out.final_field = state;
    out.final_time = t;
    const TraceRow row = trace_row(t, state, hooks.mean_offset, cfg.dt);
    if (hooks.on_step) hooks.on_step(t, state);
    if (hooks.checkpoint_every > 0 && hooks.on_checkpoint && s % hooks.checkpoint_every == 0)
      hooks.on_checkpoint(s, t, state);
    if (row.a0 > threshold) {
      out.trace.push(row);
      out.status = RunStatus::blowup_detected;
      out.message = "A0 norm exceeded blow-up threshold";
      return out;
    }
    if (s % cfg.record_every == 0 || s == steps) out.trace.push(row);
  }
  out.status = RunStatus::completed;
  return out;
}

std::optional<BlowupEvent> detect_blowup(const NormTrace& trace, double threshold) {
  const auto& rows = trace.rows();
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].a0 > threshold) return BlowupEvent{rows[i].t, rows[i].a0, i};
  return std::nullopt;
}

}  // namespace torusflow

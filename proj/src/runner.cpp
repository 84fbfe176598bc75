#include "torusflow/runner.hpp"

#include <cstdio>

#include "torusflow/report.hpp"
#include "torusflow/snapshot.hpp"

namespace torusflow {

namespace {

const char* kThinFilmVariableNote =
    "norms a0..a6 refer to v = u - 1; the mean column is the mean of u; snapshots store u";
const char* kEpitaxialVariableNote = "norms and mean refer to u";

nlohmann::json model_notes(Model m) {
  nlohmann::json notes = nlohmann::json::array();
  if (m == Model::thinfilm) {
    notes.push_back(
        "the integrator linearizes -chi Lap (1+v)^p with the exact factor chi p; the theorem check uses its "
        "stated constants unchanged");
    notes.push_back("ThinFilmA0 margin carries c chi p!/2 while lambda carries c chi p!; both are reported as is");
  }
  return notes;
}

SpectralField as_u(const SpectralField& state, Model m) {
  SpectralField u = state;
  if (m == Model::thinfilm) u.set_mode(0, 0, state.mean() + 1.0);
  return u;
}

}  // namespace

TheoremId primary_theorem(const RunConfig& cfg) {
  if (cfg.theorem) return *cfg.theorem;
  if (cfg.model() == Model::thinfilm) return TheoremId::ThinFilmA0;
  const auto& e = std::get<EpitaxialParams>(cfg.params);
  if (e.K3 == 0.0 && e.K0 == 0.0) return TheoremId::EpitaxialA0;
  return e.K0 == 0.0 ? TheoremId::EpitaxialA2_K0zero : TheoremId::EpitaxialA2_K0pos;
}

NormIndex envelope_norm(TheoremId id) {
  switch (id) {
    case TheoremId::EpitaxialA2_K0zero:
    case TheoremId::EpitaxialA2_K0pos: return NormIndex::a2;
    case TheoremId::EpitaxialA0:
    case TheoremId::ThinFilmA0: return NormIndex::a0;
  }
  return NormIndex::a0;
}

std::vector<TheoremReport> applicable_theorems(const RunConfig& cfg, const SpectralField& initial) {
  const NormVector nv = norms(initial);
  std::vector<TheoremReport> out;
  if (cfg.model() == Model::thinfilm) {
    out.push_back(check_thinfilm_A0(std::get<ThinFilmParams>(cfg.params), nv.a0));
    return out;
  }
  const auto& e = std::get<EpitaxialParams>(cfg.params);
  TheoremReport a2 = check_epitaxial_A2(e, nv.a2);
  std::optional<TheoremReport> a0;
  if (e.K3 == 0.0 && e.K0 == 0.0) a0 = check_epitaxial_A0(e, nv.a0);
  const TheoremId primary = primary_theorem(cfg);
  if (a0 && primary == TheoremId::EpitaxialA0) {
    out.push_back(*a0);
    out.push_back(a2);
  } else {
    out.push_back(a2);
    if (a0) out.push_back(*a0);
  }
  return out;
}

nlohmann::json check_report(const RunConfig& cfg) {
  const SpectralField initial = generate_initial(cfg.initial_data, cfg.n, cfg.seed, cfg.model());
  nlohmann::json j;
  j["config"] = to_json(cfg);
  j["theorems"] = nlohmann::json::array();
  for (const auto& r : applicable_theorems(cfg, initial)) j["theorems"].push_back(to_json(r));
  j["variable"] = cfg.model() == Model::thinfilm ? kThinFilmVariableNote : kEpitaxialVariableNote;
  j["notes"] = model_notes(cfg.model());
  return j;
}

RunResult execute_run(const RunConfig& cfg, const RunOptions& options) {
  const Model model = cfg.model();
  const SpectralField initial = generate_initial(cfg.initial_data, cfg.n, cfg.seed, model);
  RunResult res;
  res.initial_norms = norms(initial);
  res.theorems = applicable_theorems(cfg, initial);
  cfg.stepper.validate(res.initial_norms.a0);

  const std::filesystem::path dir = options.directory ? *options.directory : std::filesystem::path(cfg.outputs.directory);
  if (options.write_outputs) std::filesystem::create_directories(dir);

  SimulationHooks hooks;
  hooks.mean_offset = model == Model::thinfilm ? 1.0 : 0.0;
  if (options.write_outputs && cfg.outputs.checkpoint_every > 0) {
    hooks.checkpoint_every = cfg.outputs.checkpoint_every;
    hooks.on_checkpoint = [&](long step, double, const SpectralField& s) {
      char name[64];
      std::snprintf(name, sizeof name, "checkpoint_%08ld.txt", step);
      write_snapshot(dir / name, as_u(s, model));
    };
  }
  res.outcome = simulate(initial, cfg.params, cfg.stepper, hooks);

  const TheoremReport& primary = res.theorems.front();
  if (primary.satisfied && !res.outcome.trace.empty())
    res.envelope = verify_decay_envelope(res.outcome.trace, envelope_norm(primary.theorem_id), primary.lambda,
                                         cfg.envelope_tol);

  nlohmann::json& j = res.report;
  j["config"] = to_json(cfg);
  j["theorems"] = nlohmann::json::array();
  for (const auto& r : res.theorems) j["theorems"].push_back(to_json(r));
  j["primary_theorem"] = to_string(primary.theorem_id);
  j["envelope_norm"] = to_string(envelope_norm(primary.theorem_id));
  j["envelope"] = res.envelope ? to_json(*res.envelope) : nlohmann::json();
  j["status"] = to_string(res.outcome.status);
  j["final_time"] = res.outcome.final_time;
  j["message"] = res.outcome.message;
  j["threshold_a0"] = cfg.stepper.threshold_for(res.initial_norms.a0);
  j["initial_norms"] = {{"a0", res.initial_norms.a0},
                        {"a2", res.initial_norms.a2},
                        {"a4", res.initial_norms.a4},
                        {"a6", res.initial_norms.a6}};
  if (!res.outcome.trace.empty()) {
    const auto& last = res.outcome.trace.rows().back();
    j["final_norms"] = {{"a0", last.a0}, {"a2", last.a2}, {"a4", last.a4}, {"a6", last.a6}, {"mean", last.mean}};
  }
  j["variable"] = model == Model::thinfilm ? kThinFilmVariableNote : kEpitaxialVariableNote;
  j["notes"] = model_notes(model);
  if (model == Model::thinfilm) {
    // u0 >= 0 holds whenever |v0|_A0 <= 1
    j["u0_nonnegative_by_wiener_bound"] = res.initial_norms.a0 <= 1.0;
  }

  if (options.write_outputs) {
    write_trace_csv(dir / cfg.outputs.trace_csv, res.outcome.trace);
    write_report_json(dir / cfg.outputs.report_json, j);
    if (res.outcome.status != RunStatus::numerical_failure)
      write_snapshot(dir / cfg.outputs.final_snapshot, as_u(res.outcome.final_field, model));
  }
  return res;
}

}  // namespace torusflow

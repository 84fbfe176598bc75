#include "torusflow/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>

#include "torusflow/errors.hpp"
#include "torusflow/snapshot.hpp"

namespace torusflow {

using nlohmann::json;

namespace {

// Pulls typed fields out of one JSON object, recording violations instead of
// throwing so that a config reports every problem at once.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string prefix, std::vector<std::string>& errors)
      : j_(j), prefix_(std::move(prefix)), errors_(errors) {
    if (!j_.is_object()) {
      errors_.push_back(where("") + "must be a JSON object");
      valid_ = false;
    }
  }

  bool valid() const { return valid_; }
  // Marks the key as known even when it is null.
  bool has(const char* key) {
    seen_.insert(key);
    return valid_ && j_.contains(key) && !j_.at(key).is_null();
  }
  const json& at(const char* key) {
    seen_.insert(key);
    return j_.at(key);
  }

  void number(const char* key, double& out) {
    if (!present(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number()) return type_error(key, "a number");
    out = v.get<double>();
  }

  void integer(const char* key, long long& out) {
    if (!present(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number()) return type_error(key, "an integer");
    const double d = v.get<double>();
    if (!v.is_number_integer() && d != std::floor(d)) return type_error(key, "an integer");
    out = v.is_number_integer() ? v.get<long long>() : static_cast<long long>(d);
  }

  void unsigned64(const char* key, std::uint64_t& out) {
    if (!present(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
      return type_error(key, "a non-negative integer");
    out = v.get<std::uint64_t>();
  }

  void boolean(const char* key, bool& out) {
    if (!present(key)) return;
    if (!j_.at(key).is_boolean()) return type_error(key, "a boolean");
    out = j_.at(key).get<bool>();
  }

  void string(const char* key, std::string& out) {
    if (!present(key)) return;
    if (!j_.at(key).is_string()) return type_error(key, "a string");
    out = j_.at(key).get<std::string>();
  }

  void require(const char* key) {
    if (valid_ && !j_.contains(key)) errors_.push_back(where(key) + "is required");
  }

  void finish() {
    if (!valid_) return;
    for (const auto& [key, _] : j_.items())
      if (!seen_.count(key)) errors_.push_back(where(key) + "unknown key");
  }

  std::string where(const std::string& key) const {
    std::string p = prefix_;
    if (!key.empty()) p += (p.empty() ? "" : ".") + key;
    return p.empty() ? "" : p + ": ";
  }

  void error(const std::string& key, const std::string& msg) { errors_.push_back(where(key) + msg); }

 private:
  bool present(const char* key) {
    seen_.insert(key);
    return valid_ && j_.contains(key) && !j_.at(key).is_null();
  }
  void type_error(const char* key, const char* what) { errors_.push_back(where(key) + "must be " + what); }

  const json& j_;
  std::string prefix_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
  bool valid_ = true;
};

void collect(std::vector<std::string>& errors, auto&& validate) {
  try {
    validate();
  } catch (const ConfigError& e) {
    errors.insert(errors.end(), e.violations().begin(), e.violations().end());
  }
}

ModelParams parse_params(const json& j, Model model, std::vector<std::string>& errors) {
  ObjectReader r(j, "params", errors);
  if (model == Model::epitaxial) {
    EpitaxialParams p;
    r.number("K0", p.K0);
    r.number("K1", p.K1);
    r.number("K2", p.K2);
    r.number("K3", p.K3);
    r.finish();
    collect(errors, [&] { p.validate(); });
    return p;
  }
  ThinFilmParams p;
  long long exponent = p.p;
  r.number("chi", p.chi);
  r.integer("p", exponent);
  r.number("c_estimate", p.c_estimate);
  r.finish();
  p.p = static_cast<int>(std::clamp<long long>(exponent, -1, 1000));
  collect(errors, [&] { p.validate(); });
  return p;
}

InitialDataSpec parse_initial(const json& j, std::vector<std::string>& errors) {
  InitialDataSpec s;
  ObjectReader r(j, "initial_data", errors);
  std::string kind = "random_decay";
  r.string("kind", kind);
  if (kind == "modes")
    s.kind = InitialDataSpec::Kind::modes;
  else if (kind == "random_decay")
    s.kind = InitialDataSpec::Kind::random_decay;
  else if (kind == "snapshot")
    s.kind = InitialDataSpec::Kind::snapshot;
  else
    r.error("kind", "must be one of modes, random_decay, snapshot");

  if (r.has("modes")) {
    const json& list = r.at("modes");
    if (!list.is_array()) {
      r.error("modes", "must be an array");
    } else {
      for (std::size_t i = 0; i < list.size(); ++i) {
        ObjectReader e(list[i], "initial_data.modes[" + std::to_string(i) + "]", errors);
        ModeEntry m;
        if (e.has("k")) {
          const json& k = e.at("k");
          if (k.is_array() && k.size() == 2 && k[0].is_number_integer() && k[1].is_number_integer()) {
            m.k1 = k[0].get<int>();
            m.k2 = k[1].get<int>();
          } else {
            e.error("k", "must be a pair of integers");
          }
        } else {
          e.require("k");
        }
        e.number("re", m.re);
        e.number("im", m.im);
        e.finish();
        s.modes.push_back(m);
      }
    }
  }
  r.number("amplitude", s.amplitude);
  r.number("decay", s.decay);
  r.string("path", s.path);
  r.boolean("zero_mean", s.zero_mean);
  if (r.has("scale_to")) {
    ObjectReader st(r.at("scale_to"), "initial_data.scale_to", errors);
    ScaleTarget t;
    std::string norm = "a0";
    st.string("norm", norm);
    st.require("value");
    st.number("value", t.value);
    st.finish();
    try {
      t.norm = norm_index_from_string(norm);
    } catch (const std::invalid_argument& e) {
      st.error("norm", e.what());
    }
    if (!(t.value > 0) || !std::isfinite(t.value)) st.error("value", "must be a positive number");
    s.scale_to = t;
  }
  r.finish();

  if (s.kind == InitialDataSpec::Kind::modes && s.modes.empty())
    r.error("modes", "kind 'modes' needs a non-empty mode list");
  if (s.kind == InitialDataSpec::Kind::random_decay) {
    if (!(s.amplitude >= 0) || !std::isfinite(s.amplitude)) r.error("amplitude", "must be >= 0");
    if (!std::isfinite(s.decay)) r.error("decay", "must be finite");
  }
  if (s.kind == InitialDataSpec::Kind::snapshot && s.path.empty()) r.error("path", "kind 'snapshot' needs a path");
  return s;
}

StepperConfig parse_stepper(const json& j, std::vector<std::string>& errors) {
  StepperConfig s;
  ObjectReader r(j, "stepper", errors);
  std::string scheme = to_string(s.scheme);
  r.string("scheme", scheme);
  try {
    s.scheme = scheme_from_string(scheme);
  } catch (const std::invalid_argument& e) {
    r.error("scheme", e.what());
  }
  r.number("dt", s.dt);
  r.number("t_end", s.t_end);
  long long every = s.record_every;
  r.integer("record_every", every);
  s.record_every = static_cast<int>(std::clamp<long long>(every, 0, 1'000'000'000));
  if (r.has("blowup_threshold")) {
    double th = 0.0;
    r.number("blowup_threshold", th);
    s.blowup_threshold = th;
    if (!(th > 0)) r.error("blowup_threshold", "must be positive");
  }
  r.finish();
  collect(errors, [&] { s.validate(0.0); });
  return s;
}

OutputSpec parse_outputs(const json& j, std::vector<std::string>& errors) {
  OutputSpec o;
  ObjectReader r(j, "outputs", errors);
  r.string("directory", o.directory);
  r.string("trace_csv", o.trace_csv);
  r.string("report_json", o.report_json);
  r.string("final_snapshot", o.final_snapshot);
  long long every = o.checkpoint_every;
  r.integer("checkpoint_every", every);
  o.checkpoint_every = static_cast<long>(every);
  r.finish();
  if (o.checkpoint_every < 0) r.error("checkpoint_every", "must be >= 0");
  return o;
}

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

double counter_uniform(std::uint64_t seed, int k1, int k2) {
  const auto a = static_cast<std::uint64_t>(static_cast<std::uint32_t>(k1));
  const auto b = static_cast<std::uint64_t>(static_cast<std::uint32_t>(k2));
  const std::uint64_t h = mix(mix(mix(seed) ^ a) ^ (b << 1));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

RunConfig parse_config(const json& j) {
  std::vector<std::string> errors;
  RunConfig c;
  ObjectReader r(j, "", errors);
  if (!r.valid()) throw ConfigError(std::move(errors));

  std::string model;
  r.require("model");
  r.string("model", model);
  Model m = Model::epitaxial;
  if (model == "thinfilm")
    m = Model::thinfilm;
  else if (model != "epitaxial" && !model.empty())
    r.error("model", "must be 'epitaxial' or 'thinfilm'");

  r.require("params");
  if (r.has("params")) c.params = parse_params(r.at("params"), m, errors);
  else c.params = m == Model::epitaxial ? ModelParams{EpitaxialParams{}} : ModelParams{ThinFilmParams{}};

  long long n = c.n;
  r.integer("n", n);
  if (n < 1 || n > 4096) r.error("n", "requires 1 <= n <= 4096");
  c.n = static_cast<int>(std::clamp<long long>(n, 1, 4096));

  if (r.has("initial_data")) c.initial_data = parse_initial(r.at("initial_data"), errors);
  if (r.has("stepper")) c.stepper = parse_stepper(r.at("stepper"), errors);
  if (r.has("outputs")) c.outputs = parse_outputs(r.at("outputs"), errors);

  r.unsigned64("seed", c.seed);
  r.number("envelope_tol", c.envelope_tol);
  if (!(c.envelope_tol >= 0) || !std::isfinite(c.envelope_tol)) r.error("envelope_tol", "must be >= 0");
  if (r.has("theorem")) {
    std::string t;
    r.string("theorem", t);
    try {
      c.theorem = theorem_from_string(t);
    } catch (const std::invalid_argument& e) {
      r.error("theorem", e.what());
    }
  }
  r.finish();

  if (c.theorem) {
    const bool thin = *c.theorem == TheoremId::ThinFilmA0;
    if (thin != (m == Model::thinfilm)) r.error("theorem", "does not apply to model '" + to_string(m) + "'");
    if (*c.theorem == TheoremId::EpitaxialA0 && m == Model::epitaxial) {
      const auto& e = std::get<EpitaxialParams>(c.params);
      if (e.K3 != 0.0 || e.K0 != 0.0) r.error("theorem", "EpitaxialA0 requires K0 = 0 and K3 = 0");
    }
    if (*c.theorem == TheoremId::EpitaxialA2_K0zero && m == Model::epitaxial &&
        std::get<EpitaxialParams>(c.params).K0 != 0.0)
      r.error("theorem", "EpitaxialA2_K0zero requires K0 = 0");
    if (*c.theorem == TheoremId::EpitaxialA2_K0pos && m == Model::epitaxial &&
        std::get<EpitaxialParams>(c.params).K0 == 0.0)
      r.error("theorem", "EpitaxialA2_K0pos requires K0 > 0");
  }
  if (m == Model::thinfilm && !c.initial_data.zero_mean)
    r.error("initial_data.zero_mean", "the thin-film fluctuation v = u0 - 1 always has zero mean");
  for (const auto& mode : c.initial_data.modes)
    if (std::max(std::abs(mode.k1), std::abs(mode.k2)) > c.n)
      r.error("initial_data.modes", "mode (" + std::to_string(mode.k1) + "," + std::to_string(mode.k2) +
                                        ") lies outside the cutoff n = " + std::to_string(c.n));

  if (!errors.empty()) throw ConfigError(std::move(errors));
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError({"cannot open config file: " + path.string()});
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError({"JSON parse error in " + path.string() + ": " + e.what()});
  }
  return parse_config(j);
}

json to_json(const RunConfig& c) {
  json j;
  j["model"] = to_string(c.model());
  if (const auto* e = std::get_if<EpitaxialParams>(&c.params))
    j["params"] = {{"K0", e->K0}, {"K1", e->K1}, {"K2", e->K2}, {"K3", e->K3}};
  else {
    const auto& t = std::get<ThinFilmParams>(c.params);
    j["params"] = {{"chi", t.chi}, {"p", t.p}, {"c_estimate", t.c_estimate}};
  }
  j["n"] = c.n;

  const auto& s = c.initial_data;
  json init;
  switch (s.kind) {
    case InitialDataSpec::Kind::modes: init["kind"] = "modes"; break;
    case InitialDataSpec::Kind::random_decay: init["kind"] = "random_decay"; break;
    case InitialDataSpec::Kind::snapshot: init["kind"] = "snapshot"; break;
  }
  init["modes"] = json::array();
  for (const auto& m : s.modes) init["modes"].push_back({{"k", {m.k1, m.k2}}, {"re", m.re}, {"im", m.im}});
  init["amplitude"] = s.amplitude;
  init["decay"] = s.decay;
  init["path"] = s.path;
  init["zero_mean"] = s.zero_mean;
  init["scale_to"] = s.scale_to ? json{{"norm", to_string(s.scale_to->norm)}, {"value", s.scale_to->value}} : json();
  j["initial_data"] = init;

  j["stepper"] = {{"scheme", to_string(c.stepper.scheme)},
                  {"dt", c.stepper.dt},
                  {"t_end", c.stepper.t_end},
                  {"record_every", c.stepper.record_every},
                  {"blowup_threshold", c.stepper.blowup_threshold ? json(*c.stepper.blowup_threshold) : json()}};
  j["outputs"] = {{"directory", c.outputs.directory},
                  {"trace_csv", c.outputs.trace_csv},
                  {"report_json", c.outputs.report_json},
                  {"final_snapshot", c.outputs.final_snapshot},
                  {"checkpoint_every", c.outputs.checkpoint_every}};
  j["seed"] = c.seed;
  j["envelope_tol"] = c.envelope_tol;
  j["theorem"] = c.theorem ? json(to_string(*c.theorem)) : json();
  return j;
}

SpectralField generate_initial(const InitialDataSpec& spec, int n, std::uint64_t seed, Model model) {
  const ModeSet modes(n);
  const bool thin = model == Model::thinfilm;
  SpectralField field(modes);
  std::vector<std::string> errors;

  switch (spec.kind) {
    case InitialDataSpec::Kind::modes: {
      std::map<std::pair<int, int>, Complex> given;
      for (const auto& m : spec.modes) {
        if (!modes.contains(m.k1, m.k2)) {
          errors.push_back("initial_data.modes: mode outside cutoff");
          continue;
        }
        given[{m.k1, m.k2}] += Complex{m.re, m.im};
      }
      for (const auto& [k, c] : given) {
        const auto mirror = given.find({-k.first, -k.second});
        if (mirror != given.end() && std::abs(mirror->second - std::conj(c)) > 1e-12 * std::max(1.0, std::abs(c)))
          errors.push_back("initial_data.modes: entries for (" + std::to_string(k.first) + "," +
                           std::to_string(k.second) + ") and its mirror are not complex conjugates");
      }
      if (!errors.empty()) throw ConfigError(std::move(errors));
      for (const auto& [k, c] : given) {
        if (k.first == 0 && k.second == 0) {
          if (c.imag() != 0.0) throw ConfigError({"initial_data.modes: the (0,0) coefficient must be real"});
          if (thin && std::abs(c.real() - 1.0) > 1e-12)
            throw ConfigError({"initial_data.modes: thin-film u0 must have mean 1 (coefficient at (0,0))"});
          if (!thin) field.set_mode(0, 0, c);
          continue;
        }
        // k and its mirror agree, so setting either suffices
        field.set_mode(k.first, k.second, c);
      }
      break;
    }
    case InitialDataSpec::Kind::random_decay: {
      for (int k1 = 0; k1 <= n; ++k1)
        for (int k2 = -n; k2 <= n; ++k2) {
          if (k1 == 0 && k2 <= 0) continue;  // one representative per +-k pair
          const double r = std::sqrt(static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2);
          const double mag = spec.amplitude * std::pow(r, -spec.decay);
          const double phase = 2.0 * std::numbers::pi * counter_uniform(seed, k1, k2);
          field.set_mode(k1, k2, std::polar(mag, phase));
        }
      if (!spec.zero_mean && !thin) field.set_mode(0, 0, spec.amplitude);
      break;
    }
    case InitialDataSpec::Kind::snapshot: {
      const SpectralField snap = read_snapshot(std::filesystem::path(spec.path));
      if (thin && std::abs(snap.mean() - 1.0) > 1e-12)
        throw ConfigError({"initial_data.path: thin-film snapshot u0 must have mean 1"});
      field = with_cutoff(snap, n);
      if (thin) field.set_mode(0, 0, 0.0);
      break;
    }
  }

  if (spec.zero_mean) field.set_mode(0, 0, 0.0);
  if (spec.scale_to) {
    const double current = norm_of(norms(field), spec.scale_to->norm);
    if (!(current > 0)) throw ConfigError({"initial_data.scale_to: cannot rescale a field whose norm is zero"});
    field *= spec.scale_to->value / current;
  }
  return field;
}

}  // namespace torusflow

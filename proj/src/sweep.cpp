#include "torusflow/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <thread>

#include "torusflow/errors.hpp"

namespace torusflow {

namespace {

nlohmann::json::json_pointer pointer_for(const std::string& dotted) {
  std::string p;
  std::size_t start = 0;
  while (start <= dotted.size()) {
    const std::size_t dot = std::min(dotted.find('.', start), dotted.size());
    std::string part = dotted.substr(start, dot - start);
    std::string escaped;
    for (char ch : part) {
      if (ch == '~') escaped += "~0";
      else if (ch == '/') escaped += "~1";
      else escaped += ch;
    }
    p += "/" + escaped;
    start = dot + 1;
  }
  return nlohmann::json::json_pointer(p);
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(std::string s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string value_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return fmt(v.get<double>());
  return v.dump();
}

}  // namespace

SweepPlan parse_sweep_plan(const nlohmann::json& j) {
  std::vector<std::string> errors;
  SweepPlan plan;
  if (!j.is_object()) throw ConfigError({"sweep: expected a JSON object"});
  for (const auto& [key, value] : j.items()) {
    if (key == "axes") {
      if (!value.is_array()) {
        errors.push_back("axes: must be an array");
        continue;
      }
      for (std::size_t i = 0; i < value.size(); ++i) {
        const auto& a = value[i];
        const std::string where = "axes[" + std::to_string(i) + "]";
        if (!a.is_object() || !a.contains("path") || !a.contains("values") || a.size() != 2 ||
            !a["path"].is_string() || !a["values"].is_array()) {
          errors.push_back(where + ": expected {\"path\": string, \"values\": array}");
          continue;
        }
        if (a["values"].empty()) errors.push_back(where + ".values: must not be empty");
        SweepAxis axis{a["path"].get<std::string>(), {}};
        for (const auto& v : a["values"]) axis.values.push_back(v);
        plan.axes.push_back(std::move(axis));
      }
    } else if (key == "max_runs") {
      if (!value.is_number_unsigned() || value.get<std::size_t>() == 0)
        errors.push_back("max_runs: must be a positive integer");
      else
        plan.options.max_runs = value.get<std::size_t>();
    } else if (key == "threads") {
      if (!value.is_number_unsigned())
        errors.push_back("threads: must be a non-negative integer");
      else
        plan.options.threads = value.get<unsigned>();
    } else if (key == "directory") {
      if (!value.is_string())
        errors.push_back("directory: must be a string");
      else
        plan.options.directory = value.get<std::string>();
    } else {
      errors.push_back(key + ": unknown key");
    }
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return plan;
}

SweepPlan load_sweep_plan(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError({"cannot open sweep file: " + path.string()});
  try {
    return parse_sweep_plan(nlohmann::json::parse(is));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError({"JSON parse error in " + path.string() + ": " + e.what()});
  }
}

SweepSummary run_sweep(const RunConfig& base, const std::vector<SweepAxis>& axes, const SweepOptions& options) {
  const nlohmann::json base_json = to_json(base);
  std::vector<std::string> errors;
  std::size_t total = 1;
  for (const auto& axis : axes) {
    if (axis.values.empty()) errors.push_back("axis '" + axis.path + "': no values");
    try {
      if (!base_json.contains(pointer_for(axis.path)))
        errors.push_back("axis '" + axis.path + "': not a configuration path");
    } catch (const nlohmann::json::exception&) {
      errors.push_back("axis '" + axis.path + "': not a configuration path");
    }
    if (!axis.values.empty()) total = std::min(total * axis.values.size(), options.max_runs + 1);
  }
  if (total > options.max_runs)
    errors.push_back("sweep has more than max_runs = " + std::to_string(options.max_runs) + " runs");
  if (!errors.empty()) throw ConfigError(std::move(errors));

  SweepSummary summary;
  for (const auto& axis : axes) summary.axis_paths.push_back(axis.path);
  summary.rows.resize(total);
  for (std::size_t i = 0; i < total; ++i) {
    SweepRow& row = summary.rows[i];
    row.index = i;
    std::size_t rem = i;
    row.values.resize(axes.size());
    for (std::size_t a = axes.size(); a-- > 0;) {
      row.values[a] = axes[a].values[rem % axes[a].values.size()];
      rem /= axes[a].values.size();
    }
  }

  auto run_one = [&](SweepRow& row) {
    try {
      nlohmann::json j = base_json;
      for (std::size_t a = 0; a < axes.size(); ++a) j[pointer_for(axes[a].path)] = row.values[a];
      const RunConfig cfg = parse_config(j);
      char name[32];
      std::snprintf(name, sizeof name, "run_%04zu", row.index);
      RunOptions ro;
      ro.write_outputs = options.write_outputs;
      ro.directory = options.directory / name;
      const RunResult res = execute_run(cfg, ro);
      row.theorem = res.theorems.front();
      row.status = res.outcome.status;
      row.envelope = res.envelope;
      if (!res.outcome.trace.empty()) row.final_row = res.outcome.trace.rows().back();
      if (res.outcome.status == RunStatus::numerical_failure) row.error = res.outcome.message;
    } catch (const ConfigError& e) {
      std::string msg;
      for (const auto& v : e.violations()) msg += (msg.empty() ? "" : "; ") + v;
      row.error = "config: " + msg;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  };

  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < total;) run_one(summary.rows[i]);
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return summary;
}

void write_sweep_csv(std::ostream& os, const SweepSummary& s) {
  os << "index";
  for (const auto& p : s.axis_paths) os << ',' << csv_field(p);
  os << ",theorem_id,margin,lambda,satisfied,status,envelope_passed,worst_ratio,final_t,a0,a2,a4,a6,error\n";
  for (const auto& r : s.rows) {
    os << r.index;
    for (const auto& v : r.values) os << ',' << csv_field(value_text(v));
    if (r.theorem)
      os << ',' << to_string(r.theorem->theorem_id) << ',' << fmt(r.theorem->margin) << ','
         << fmt(r.theorem->lambda) << ',' << (r.theorem->satisfied ? "true" : "false");
    else
      os << ",,,,";
    os << ',' << (r.status ? to_string(*r.status) : "failed");
    if (r.envelope)
      os << ',' << (r.envelope->passed ? "true" : "false") << ',' << fmt(r.envelope->worst_ratio);
    else
      os << ",,";
    if (r.final_row)
      os << ',' << fmt(r.final_row->t) << ',' << fmt(r.final_row->a0) << ',' << fmt(r.final_row->a2) << ','
         << fmt(r.final_row->a4) << ',' << fmt(r.final_row->a6);
    else
      os << ",,,,,";
    os << ',' << csv_field(r.error) << '\n';
  }
}

void write_sweep_csv(const std::filesystem::path& path, const SweepSummary& s) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open sweep summary for writing: " + path.string());
  write_sweep_csv(os, s);
}

}  // namespace torusflow

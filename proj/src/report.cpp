#include "torusflow/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "torusflow/errors.hpp"

namespace torusflow {

void write_trace_csv(std::ostream& os, const NormTrace& trace) {
  os << kTraceHeader << '\n';
  char line[512];
  for (const auto& r : trace.rows()) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t, r.a0, r.a2, r.a4, r.a6,
                  r.mean, r.dt);
    os << line;
  }
}

void write_trace_csv(const std::filesystem::path& path, const NormTrace& trace) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open trace for writing: " + path.string());
  write_trace_csv(os, trace);
  if (!os) throw std::runtime_error("failed writing trace: " + path.string());
}

NormTrace read_trace_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kTraceHeader)
    throw FormatError(std::string("trace: expected header '") + kTraceHeader + "'");
  NormTrace trace;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    double v[7];
    const char* p = line.c_str();
    for (int i = 0; i < 7; ++i) {
      char* end = nullptr;
      v[i] = std::strtod(p, &end);
      if (end == p || (i < 6 && *end != ',') || (i == 6 && *end != '\0'))
        throw FormatError("trace: malformed row at line " + std::to_string(lineno));
      p = end + 1;
    }
    try {
      trace.push(TraceRow{v[0], v[1], v[2], v[3], v[4], v[5], v[6]});
    } catch (const std::invalid_argument& e) {
      throw FormatError("trace: line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return trace;
}

NormTrace read_trace_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open trace: " + path.string());
  return read_trace_csv(is);
}

nlohmann::json to_json(const TheoremReport& r) {
  nlohmann::json inputs = nlohmann::json::object();
  for (const auto& [k, v] : r.inputs) inputs[k] = v;
  return {{"theorem_id", to_string(r.theorem_id)},
          {"inputs", inputs},
          {"margin", r.margin},
          {"lambda", r.lambda},
          {"satisfied", r.satisfied}};
}

nlohmann::json to_json(const EnvelopeVerdict& v) {
  return {{"passed", v.passed},
          {"worst_ratio", v.worst_ratio},
          {"first_violation_t", v.first_violation_t ? nlohmann::json(*v.first_violation_t) : nlohmann::json()}};
}

void write_report_json(const std::filesystem::path& path, const nlohmann::json& report) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open report for writing: " + path.string());
  os << report.dump(2) << '\n';
  if (!os) throw std::runtime_error("failed writing report: " + path.string());
}

}  // namespace torusflow

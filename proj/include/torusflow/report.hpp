#ifndef TORUSFLOW_REPORT_HPP
#define TORUSFLOW_REPORT_HPP

#include <filesystem>
#include <iosfwd>

#include <json.hpp>

#include "torusflow/integrator.hpp"
#include "torusflow/theory.hpp"

namespace torusflow {

inline constexpr const char* kTraceHeader = "t,a0,a2,a4,a6,mean,dt";

/// Header plus one %.17g row per trace entry.
void write_trace_csv(std::ostream& os, const NormTrace& trace);
void write_trace_csv(const std::filesystem::path& path, const NormTrace& trace);

/// Throws FormatError on a wrong header or malformed row.
NormTrace read_trace_csv(std::istream& is);
NormTrace read_trace_csv(const std::filesystem::path& path);

nlohmann::json to_json(const TheoremReport& r);
nlohmann::json to_json(const EnvelopeVerdict& v);

void write_report_json(const std::filesystem::path& path, const nlohmann::json& report);

}  // namespace torusflow

#endif  // TORUSFLOW_REPORT_HPP

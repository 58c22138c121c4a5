#pragma once

#include <string>
#include <vector>

#include "rla/dispatch.hpp"
#include "rla/solver.hpp"

namespace rla {

inline constexpr const char* kSessionFormatVersion = "rla-session-v1";
inline constexpr const char* kSweepFormatVersion = "rla-sweep-v1";

// Everything a report consumer needs to reproduce the run. Serialized into
// every output; deliberately carries no timestamps so reruns are
// byte-identical.
struct ReportMeta {
  DrrRequest request;
  ScenarioConfig scenario;
};

std::string session_to_json(const SessionReport& report, const ReportMeta& meta);
std::string session_to_csv(const SessionReport& report, const ReportMeta& meta);
/// Fixed-width per-resident table for the terminal.
std::string session_to_table(const SessionReport& report);

std::string sweep_to_json(const std::vector<SweepCell>& cells, const ReportMeta& meta);
/// Long format: one row per cell, plot-friendly.
std::string sweep_to_csv(const std::vector<SweepCell>& cells, const ReportMeta& meta);

}  // namespace rla

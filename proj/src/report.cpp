#include "rla/report.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace rla {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string tiers_label(const std::vector<RateTier>& tiers) {
  if (tiers.empty()) return "-";
  std::string out;
  for (size_t i = 0; i < tiers.size(); ++i) {
    if (i > 0) out += ",";
    out += to_string(tiers[i]);
  }
  return out;
}

json meta_to_json(const ReportMeta& meta) {
  json m;
  m["amount_kw"] = meta.request.amount_kw;
  m["delta"] = meta.request.delta;
  m["duration_minutes"] = meta.request.duration_minutes;
  m["mode"] = to_string(meta.request.mode);
  m["ambient_f"] = meta.scenario.ambient_trajectory_f;
  m["schedule_cents"] = {meta.scenario.schedule.r1_cents, meta.scenario.schedule.r2_cents,
                         meta.scenario.schedule.r3_cents};
  m["comfort_weight_microcents"] = meta.scenario.objective.comfort_weight;
  m["big_m"] = meta.scenario.objective.big_m;
  m["epsilon_f"] = meta.scenario.objective.strict_epsilon_f;
  m["grid_units_per_kw"] = meta.scenario.objective.grid_units_per_kw;
  m["seed"] = meta.scenario.seed;
  m["disturbance_amplitude_f"] = meta.scenario.disturbance.amplitude_f;
  return m;
}

std::string meta_comment_lines(const ReportMeta& meta) {
  std::ostringstream out;
  out << "# meta: amount_kw=" << fmt(meta.request.amount_kw) << " delta=" << fmt(meta.request.delta)
      << " duration_minutes=" << meta.request.duration_minutes
      << " mode=" << to_string(meta.request.mode) << "\n";
  out << "# meta: ambient_f=";
  for (size_t i = 0; i < meta.scenario.ambient_trajectory_f.size(); ++i) {
    if (i > 0) out << "|";
    out << fmt(meta.scenario.ambient_trajectory_f[i]);
  }
  out << " schedule_cents=" << fmt(meta.scenario.schedule.r1_cents) << "/"
      << fmt(meta.scenario.schedule.r2_cents) << "/" << fmt(meta.scenario.schedule.r3_cents)
      << "\n";
  out << "# meta: comfort_weight_microcents=" << meta.scenario.objective.comfort_weight
      << " big_m=" << fmt(meta.scenario.objective.big_m)
      << " epsilon_f=" << fmt(meta.scenario.objective.strict_epsilon_f)
      << " grid_units_per_kw=" << meta.scenario.objective.grid_units_per_kw
      << " seed=" << meta.scenario.seed
      << " disturbance_amplitude_f=" << fmt(meta.scenario.disturbance.amplitude_f) << "\n";
  return out.str();
}

}  // namespace

std::string session_to_json(const SessionReport& report, const ReportMeta& meta) {
  json doc;
  doc["version"] = kSessionFormatVersion;
  doc["meta"] = meta_to_json(meta);

  json residents = json::array();
  for (const auto& stats : report.residents) {
    json r;
    r["id"] = stats.id;
    r["compromise"] = stats.compromise;
    if (stats.ac) {
      r["ac_min_f"] = stats.ac->min_f;
      r["ac_max_f"] = stats.ac->max_f;
    }
    if (stats.ewh) {
      r["ewh_min_f"] = stats.ewh->min_f;
      r["ewh_max_f"] = stats.ewh->max_f;
    }
    r["cmft_percent"] = stats.cmft_percent;
    json tiers = json::array();
    for (RateTier tier : stats.tiers_seen) tiers.push_back(to_string(tier));
    r["tiers"] = tiers;
    r["participation"] = stats.participation_count;
    r["reward_cents"] = microcents_to_cents(stats.total_reward);
    residents.push_back(std::move(r));
  }
  doc["residents"] = residents;

  json session;
  session["steps_requested"] = report.steps_requested;
  session["steps_completed"] = report.steps_completed;
  session["aborted"] = report.aborted;
  if (report.abort_info) session["abort_reason"] = report.abort_info->message;
  session["total_reward_cents"] = microcents_to_cents(report.total_reward);
  session["average_cmft_percent"] = report.average_cmft_percent;
  session["tdr_trace_kw"] = report.tdr_trace_kw;
  doc["session"] = session;
  return doc.dump(2) + "\n";
}

std::string session_to_csv(const SessionReport& report, const ReportMeta& meta) {
  std::ostringstream out;
  out << "# " << kSessionFormatVersion << "\n";
  out << meta_comment_lines(meta);
  out << "id,compromise,ac_min_f,ac_max_f,ewh_min_f,ewh_max_f,cmft_percent,tiers,participation,"
         "reward_cents\n";
  for (const auto& stats : report.residents) {
    out << stats.id << ',' << (stats.compromise ? 1 : 0) << ',';
    if (stats.ac) out << fmt(stats.ac->min_f) << ',' << fmt(stats.ac->max_f) << ',';
    else out << ",,";
    if (stats.ewh) out << fmt(stats.ewh->min_f) << ',' << fmt(stats.ewh->max_f) << ',';
    else out << ",,";
    out << fmt(stats.cmft_percent) << ',' << tiers_label(stats.tiers_seen) << ','
        << stats.participation_count << ',' << fmt(microcents_to_cents(stats.total_reward))
        << "\n";
  }
  out << "# session: steps_requested=" << report.steps_requested
      << " steps_completed=" << report.steps_completed
      << " aborted=" << (report.aborted ? 1 : 0)
      << " total_reward_cents=" << fmt(microcents_to_cents(report.total_reward))
      << " average_cmft_percent=" << fmt(report.average_cmft_percent) << " tdr_trace_kw=";
  for (size_t i = 0; i < report.tdr_trace_kw.size(); ++i) {
    if (i > 0) out << "|";
    out << fmt(report.tdr_trace_kw[i]);
  }
  out << "\n";
  if (report.abort_info) out << "# abort: " << report.abort_info->message << "\n";
  return out.str();
}

std::string session_to_table(const SessionReport& report) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-8s %-4s %9s %9s %9s %9s %7s %-10s %8s\n", "id", "cop",
                "ac_min", "ac_max", "ewh_min", "ewh_max", "cmft%", "tiers", "cents");
  out << line;
  for (const auto& stats : report.residents) {
    char ac_min[16] = "-", ac_max[16] = "-", ewh_min[16] = "-", ewh_max[16] = "-";
    if (stats.ac) {
      std::snprintf(ac_min, sizeof(ac_min), "%.1f", stats.ac->min_f);
      std::snprintf(ac_max, sizeof(ac_max), "%.1f", stats.ac->max_f);
    }
    if (stats.ewh) {
      std::snprintf(ewh_min, sizeof(ewh_min), "%.1f", stats.ewh->min_f);
      std::snprintf(ewh_max, sizeof(ewh_max), "%.1f", stats.ewh->max_f);
    }
    std::snprintf(line, sizeof(line), "%-8s %-4d %9s %9s %9s %9s %7.1f %-10s %8.1f\n",
                  stats.id.c_str(), stats.compromise ? 1 : 0, ac_min, ac_max, ewh_min, ewh_max,
                  stats.cmft_percent, tiers_label(stats.tiers_seen).c_str(),
                  microcents_to_cents(stats.total_reward));
    out << line;
  }
  std::snprintf(line, sizeof(line),
                "session: steps %d/%d, total %.1f cents, average cmft %.1f%%\n",
                report.steps_completed, report.steps_requested,
                microcents_to_cents(report.total_reward), report.average_cmft_percent);
  out << line;
  if (report.aborted && report.abort_info) {
    out << "aborted: " << report.abort_info->message << "\n";
  }
  return out.str();
}

std::string sweep_to_json(const std::vector<SweepCell>& cells, const ReportMeta& meta) {
  json doc;
  doc["version"] = kSweepFormatVersion;
  doc["meta"] = meta_to_json(meta);
  json rows = json::array();
  for (const auto& cell : cells) {
    json c;
    c["amount_kw"] = cell.amount_kw;
    c["duration_minutes"] = cell.duration_minutes;
    c["feasible"] = cell.feasible;
    c["total_reward_cents"] = microcents_to_cents(cell.total_reward);
    c["average_cmft_percent"] = cell.average_cmft_percent;
    if (!cell.error.empty()) c["error"] = cell.error;
    rows.push_back(std::move(c));
  }
  doc["cells"] = rows;
  return doc.dump(2) + "\n";
}

std::string sweep_to_csv(const std::vector<SweepCell>& cells, const ReportMeta& meta) {
  std::ostringstream out;
  out << "# " << kSweepFormatVersion << "\n";
  out << meta_comment_lines(meta);
  out << "amount_kw,duration_minutes,feasible,total_reward_cents,average_cmft_percent,error\n";
  for (const auto& cell : cells) {
    std::string error = cell.error;  // keep the cell a single CSV field
    for (char& c : error) {
      if (c == ',' || c == '\n') c = ';';
    }
    out << fmt(cell.amount_kw) << ',' << cell.duration_minutes << ',' << (cell.feasible ? 1 : 0)
        << ',' << fmt(microcents_to_cents(cell.total_reward)) << ','
        << fmt(cell.average_cmft_percent) << ',' << error << "\n";
  }
  return out.str();
}

}  // namespace rla

#include "rla/dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "rla/rng.hpp"

namespace rla {

double ScenarioConfig::ambient_at(int step) const {
  if (ambient_trajectory_f.size() == 1) return ambient_trajectory_f.front();
  return ambient_trajectory_f.at(static_cast<size_t>(step));
}

void ScenarioConfig::validate(int step_count) const {
  if (ambient_trajectory_f.empty()) {
    throw std::invalid_argument("scenario: ambient trajectory must not be empty");
  }
  if (ambient_trajectory_f.size() != 1 &&
      ambient_trajectory_f.size() < static_cast<size_t>(step_count)) {
    throw std::invalid_argument("scenario: ambient trajectory shorter than the session");
  }
  for (double t : ambient_trajectory_f) {
    if (!std::isfinite(t) || t < kMinTempF || t > kMaxTempF) {
      throw std::invalid_argument("scenario: ambient temperature out of representable range");
    }
  }
  schedule.validate();
  objective.validate();
  if (disturbance.amplitude_f < 0 || !std::isfinite(disturbance.amplitude_f)) {
    throw std::invalid_argument("scenario: disturbance amplitude must be non-negative");
  }
}

double compute_cmft(const std::vector<std::vector<double>>& temps,
                    const std::vector<ComfortRange>& ranges) {
  if (temps.empty() || temps.size() != ranges.size()) {
    throw std::invalid_argument("compute_cmft: one trace per range required");
  }
  const size_t steps = temps.front().size();
  if (steps == 0) throw std::invalid_argument("compute_cmft: empty trace");
  for (const auto& trace : temps) {
    if (trace.size() != steps) throw std::invalid_argument("compute_cmft: ragged traces");
  }
  size_t inside = 0;
  for (size_t k = 0; k < steps; ++k) {
    bool all_in = true;
    for (size_t a = 0; a < temps.size(); ++a) {
      if (!ranges[a].contains(temps[a][k])) {
        all_in = false;
        break;
      }
    }
    if (all_in) ++inside;
  }
  return 100.0 * static_cast<double>(inside) / static_cast<double>(steps);
}

SessionReport run_session(const Fleet& fleet, const DrrRequest& request,
                          const ScenarioConfig& scenario) {
  request.validate();
  const int steps = request.step_count();
  scenario.validate(steps);
  const auto& config = scenario.objective;
  const ReductionWindow window = ReductionWindow::from_request(request, config.grid_units_per_kw);

  SessionReport report;
  report.steps_requested = steps;

  fleet.validate();
  RewardLedger& ledger = report.ledger;
  for (const auto& profile : fleet.profiles) ledger.register_resident(profile.id);

  // Rolling thermal state, fed back after every step.
  std::vector<InitialTemps> temps = fleet.initial_temps;
  // Per-resident end-of-step traces (plus observed extrema including t0).
  const size_t n = fleet.size();
  std::vector<std::vector<double>> room_trace(n);
  std::vector<std::vector<double>> tank_trace(n);
  std::vector<std::set<RateTier>> tiers_seen(n);

  SplitMix64 noise(scenario.seed);

  for (int step = 0; step < steps; ++step) {
    const double ambient = scenario.ambient_at(step);

    std::vector<ResidentOptions> fleet_options;
    fleet_options.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      ThermalState state{temps[i].room_f, temps[i].tank_f, ambient};
      fleet_options.push_back(ResidentOptions{
          fleet.profiles[i].id,
          enumerate_options(fleet.profiles[i], state, scenario.schedule, config, request.mode)});
    }

    // Participation-history fairness: residents with fewer recorded
    // curtailments are preferred when the step objective ties.
    std::vector<FairnessKey> keys;
    keys.reserve(n);
    for (const auto& profile : fleet.profiles) keys.push_back(ledger.fairness_key(profile.id));
    std::sort(keys.begin(), keys.end());
    std::vector<std::string> fairness_order;
    fairness_order.reserve(n);
    for (auto& key : keys) fairness_order.push_back(std::move(key.resident));

    SolveOutcome outcome = solve_step(fleet_options, window, config, &fairness_order);
    if (!outcome.feasible()) {
      report.aborted = true;
      report.abort_info = std::move(outcome.infeasible);
      break;
    }
    const SolveResult& result = *outcome.solution;
    report.tdr_trace_kw.push_back(result.total_reduction_kw);

    // Apply the decision and advance every appliance; sensor feedback equals
    // the prediction plus the optional disturbance.
    std::vector<StepEntry> entries;
    entries.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      const auto& profile = fleet.profiles[i];
      const ChosenOption* chosen = nullptr;
      for (const auto& candidate : result.per_resident) {
        if (candidate.resident == profile.id) {
          chosen = &candidate;
          break;
        }
      }
      if (chosen == nullptr) throw std::logic_error("run_session: decision misses a resident");
      const ResidentOption& opt = chosen->option;

      StepEntry entry;
      entry.resident = profile.id;
      entry.reward = opt.reward;
      entry.participated = opt.participates();
      if (profile.ac && !opt.ac_on) entry.tiers.emplace_back(ApplianceKind::Ac, *opt.ac_tier);
      if (profile.ewh && !opt.ewh_on) entry.tiers.emplace_back(ApplianceKind::Ewh, *opt.ewh_tier);
      for (const auto& [kind, tier] : entry.tiers) tiers_seen[i].insert(tier);
      entries.push_back(std::move(entry));

      if (profile.ac) {
        double next = *opt.predicted_room_f;
        if (scenario.disturbance.amplitude_f > 0) {
          next += noise.uniform(-scenario.disturbance.amplitude_f,
                                scenario.disturbance.amplitude_f);
        }
        temps[i].room_f = next;
        room_trace[i].push_back(next);
      }
      if (profile.ewh) {
        double next = *opt.predicted_tank_f;
        if (scenario.disturbance.amplitude_f > 0) {
          next += noise.uniform(-scenario.disturbance.amplitude_f,
                                scenario.disturbance.amplitude_f);
        }
        temps[i].tank_f = next;
        tank_trace[i].push_back(next);
      }
    }
    ledger.record_step(step, entries);
    report.steps_completed = step + 1;
  }

  // Assemble per-resident statistics.
  double cmft_sum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const auto& profile = fleet.profiles[i];
    ResidentSessionStats stats;
    stats.id = profile.id;
    stats.compromise = profile.compromise;
    const auto& record = ledger.record(profile.id);
    stats.total_reward = record.cumulative;
    stats.participation_count = record.participation_count;
    stats.tiers_seen.assign(tiers_seen[i].begin(), tiers_seen[i].end());

    std::vector<std::vector<double>> traces;
    std::vector<ComfortRange> ranges;
    if (profile.ac) {
      ApplianceTrace trace{*fleet.initial_temps[i].room_f, *fleet.initial_temps[i].room_f};
      for (double t : room_trace[i]) {
        trace.min_f = std::min(trace.min_f, t);
        trace.max_f = std::max(trace.max_f, t);
      }
      stats.ac = trace;
      traces.push_back(room_trace[i]);
      ranges.push_back(profile.ac->comfort);
    }
    if (profile.ewh) {
      ApplianceTrace trace{*fleet.initial_temps[i].tank_f, *fleet.initial_temps[i].tank_f};
      for (double t : tank_trace[i]) {
        trace.min_f = std::min(trace.min_f, t);
        trace.max_f = std::max(trace.max_f, t);
      }
      stats.ewh = trace;
      traces.push_back(tank_trace[i]);
      ranges.push_back(profile.ewh->comfort);
    }
    stats.cmft_percent =
        report.steps_completed > 0 ? compute_cmft(traces, ranges) : 100.0;
    cmft_sum += stats.cmft_percent;
    report.residents.push_back(std::move(stats));
  }
  report.total_reward = ledger.total();
  report.average_cmft_percent = n > 0 ? cmft_sum / static_cast<double>(n) : 100.0;
  return report;
}

std::vector<SweepCell> run_sweep(const Fleet& fleet, const std::vector<double>& amounts_kw,
                                 const std::vector<int>& durations_minutes, double delta,
                                 SeasonMode mode, const ScenarioConfig& scenario) {
  if (amounts_kw.empty() || durations_minutes.empty()) {
    throw std::invalid_argument("sweep: amount and duration axes must be non-empty");
  }
  std::vector<SweepCell> cells;
  cells.reserve(amounts_kw.size() * durations_minutes.size());
  for (double amount : amounts_kw) {
    for (int duration : durations_minutes) {
      DrrRequest request{amount, delta, duration, mode};
      SweepCell cell;
      cell.amount_kw = amount;
      cell.duration_minutes = duration;
      SessionReport report = run_session(fleet, request, scenario);
      if (report.aborted) {
        cell.feasible = false;
        cell.error = report.abort_info ? report.abort_info->message : "infeasible";
        cell.total_reward = report.total_reward;
        cell.average_cmft_percent = report.average_cmft_percent;
      } else {
        cell.feasible = true;
        cell.total_reward = report.total_reward;
        cell.average_cmft_percent = report.average_cmft_percent;
      }
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

}  // namespace rla

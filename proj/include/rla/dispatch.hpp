#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rla/fleet.hpp"
#include "rla/model.hpp"
#include "rla/rewards.hpp"
#include "rla/solver.hpp"

namespace rla {

// Optional additive sensor disturbance applied to every realized end-of-step
// temperature, drawn uniformly from [-amplitude, amplitude] with a seeded
// stream. Amplitude zero (the default) makes feedback equal prediction.
struct DisturbanceConfig {
  double amplitude_f = 0.0;
};

struct ScenarioConfig {
  // One entry per step, or a single entry used for every step.
  std::vector<double> ambient_trajectory_f;
  RewardSchedule schedule;
  ObjectiveConfig objective;
  std::uint64_t seed = 0;
  DisturbanceConfig disturbance;

  double ambient_at(int step) const;
  void validate(int step_count) const;
};

struct ApplianceTrace {
  double min_f = 0.0;  // over the initial temperature and every end-of-step sample
  double max_f = 0.0;
};

struct ResidentSessionStats {
  std::string id;
  bool compromise = false;
  std::optional<ApplianceTrace> ac;
  std::optional<ApplianceTrace> ewh;
  double cmft_percent = 100.0;
  std::vector<RateTier> tiers_seen;  // distinct tiers paid, ascending
  Microcents total_reward = 0;
  int participation_count = 0;
};

struct SessionReport {
  std::vector<ResidentSessionStats> residents;
  int steps_requested = 0;
  int steps_completed = 0;
  bool aborted = false;
  std::optional<InfeasibleInfo> abort_info;
  Microcents total_reward = 0;
  std::vector<double> tdr_trace_kw;  // one entry per completed step
  double average_cmft_percent = 100.0;
  RewardLedger ledger;
};

/// Executes a multi-interval request as duration/5 rolling steps: solve
/// against the current temperatures, apply the decision (curtailed
/// appliances off, everything else on), advance every appliance one step,
/// record rewards, repeat with the fed-back state. An infeasible step aborts
/// the session and reports the completed prefix plus the diagnostic.
SessionReport run_session(const Fleet& fleet, const DrrRequest& request,
                          const ScenarioConfig& scenario);

/// Percentage of steps in which every appliance sits inside its inclusive
/// comfort range, judged on end-of-step temperatures. `temps[a][k]` is
/// appliance a's temperature after step k; traces must be non-empty and of
/// equal length.
double compute_cmft(const std::vector<std::vector<double>>& temps,
                    const std::vector<ComfortRange>& ranges);

struct SweepCell {
  double amount_kw = 0.0;
  int duration_minutes = 0;
  bool feasible = false;
  Microcents total_reward = 0;
  double average_cmft_percent = 0.0;
  std::string error;
};

/// Runs one independent session per (amount, duration) pair, every cell from
/// the same initial conditions. Cell order: amounts outer, durations inner.
/// Infeasible cells carry the diagnostic and the sweep continues.
std::vector<SweepCell> run_sweep(const Fleet& fleet, const std::vector<double>& amounts_kw,
                                 const std::vector<int>& durations_minutes, double delta,
                                 SeasonMode mode, const ScenarioConfig& scenario);

}  // namespace rla

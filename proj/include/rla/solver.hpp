#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rla/model.hpp"
#include "rla/rewards.hpp"

namespace rla {

// A demand-reduction request: shed `amount_kw` for `duration_minutes`,
// tolerating a relative deviation of `delta` on the achieved reduction.
struct DrrRequest {
  double amount_kw = 0.0;
  double delta = 0.05;
  int duration_minutes = kStepMinutes;
  SeasonMode mode = SeasonMode::Cooling;

  void validate() const;
  int step_count() const { return duration_minutes / kStepMinutes; }
};

struct ObjectiveConfig {
  // Cost per unit of squared comfort margin per resident-step, in
  // micro-cents. Small enough by default that it only breaks ties between
  // equal-reward decisions.
  Microcents comfort_weight = 100;
  // Indicator-constraint constant for the exported MILP; must dominate any
  // achievable |temperature - threshold|.
  double big_m = 1000.0;
  // Slack used to render strict inequalities in the exported MILP.
  double strict_epsilon_f = 0.001;
  int grid_units_per_kw = kDefaultGridUnitsPerKw;

  void validate() const;
};

// One candidate on/off assignment for a single resident, with its predicted
// end-of-step temperatures, tier classification, and cost contribution.
// cost = step reward + comfort_weight * cm_total^2, rounded to micro-cents.
struct ResidentOption {
  bool ac_on = true;
  bool ewh_on = true;
  int reduction_units = 0;
  Microcents reward = 0;
  Microcents cost = 0;
  double cm_total = 0.0;
  std::optional<double> predicted_room_f;
  std::optional<double> predicted_tank_f;
  std::optional<RateTier> ac_tier;
  std::optional<RateTier> ewh_tier;

  bool participates() const { return reduction_units > 0; }
};

struct ResidentOptions {
  std::string resident;
  std::vector<ResidentOption> options;
};

/// Enumerates every on/off combination for the resident's appliances (2
/// options, or 4 when both appliances are present), in a fixed order with
/// the all-on option first.
std::vector<ResidentOption> enumerate_options(const ResidentProfile& profile,
                                              const ThermalState& state,
                                              const RewardSchedule& schedule,
                                              const ObjectiveConfig& config, SeasonMode mode);

// Inclusive target band for the total reduction, on the power grid.
struct ReductionWindow {
  int lo_units = 0;
  int hi_units = 0;

  static ReductionWindow from_amount(double amount_kw, double delta, int units_per_kw);
  static ReductionWindow from_request(const DrrRequest& request, int units_per_kw);
  bool contains(int units) const { return lo_units <= units && units <= hi_units; }
  bool empty() const { return lo_units > hi_units; }
};

struct ControlDecision {
  std::vector<std::pair<std::string, ResidentDecision>> entries;

  const ResidentDecision* find(const std::string& resident) const;
};

struct ChosenOption {
  std::string resident;
  ResidentOption option;
};

struct SolveResult {
  ControlDecision decision;
  int total_reduction_units = 0;
  double total_reduction_kw = 0.0;
  Microcents objective = 0;
  std::vector<ChosenOption> per_resident;
};

struct InfeasibleInfo {
  double window_lo_kw = 0.0;
  double window_hi_kw = 0.0;
  double max_reachable_kw = 0.0;
  std::optional<double> nearest_below_kw;  // largest reachable sum below the window
  std::optional<double> nearest_above_kw;  // smallest reachable sum above the window
  std::string message;
};

struct SolveOutcome {
  std::optional<SolveResult> solution;
  std::optional<InfeasibleInfo> infeasible;

  bool feasible() const { return solution.has_value(); }
};

/// Exact single-step optimum: picks one option per resident so that the
/// summed reduction lands inside `window` and the total cost is minimal.
/// Dynamic program over the cumulative reduction on the power grid, so the
/// result is a true global optimum, not a heuristic.
///
/// Ties on cost are broken by the participation-history rule: residents
/// listed earlier in `fairness_order` (fewer past participations) are
/// preferred for curtailment. When no order is given, residents are taken in
/// lexicographic id order. Within one resident, tied options are taken in
/// enumeration order with participating options first.
SolveOutcome solve_step(const std::vector<ResidentOptions>& fleet_options,
                        const ReductionWindow& window, const ObjectiveConfig& config,
                        const std::vector<std::string>* fairness_order = nullptr);

/// Brute-force reference with the same contract as solve_step, used as the
/// solver's independent oracle. Refuses instances with more than 24 binary
/// decisions.
SolveOutcome solve_exhaustive(const std::vector<ResidentOptions>& fleet_options,
                              const ReductionWindow& window, const ObjectiveConfig& config);

/// All achievable total-reduction sums, in grid units, sorted ascending.
std::vector<int> reachable_reduction_units(const std::vector<ResidentOptions>& fleet_options);

/// Same, computed directly from appliance powers (no thermal state needed).
std::vector<int> reachable_reduction_units(const std::vector<ResidentProfile>& profiles,
                                           int units_per_kw = kDefaultGridUnitsPerKw);

/// Diagnostic payload for an unreachable window.
InfeasibleInfo describe_infeasible(const std::vector<int>& reachable_units,
                                   const ReductionWindow& window, int units_per_kw);

}  // namespace rla

#include "rla/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>

namespace rla {

namespace {

constexpr Microcents kInfCost = std::numeric_limits<Microcents>::max() / 4;
// Cap on the comfort term of a single option so that pathological comfort
// margins cannot overflow the integer cost arithmetic.
constexpr double kComfortCostCap = 1e15;

}  // namespace

void DrrRequest::validate() const {
  if (!(amount_kw >= 0.0) || !std::isfinite(amount_kw)) {
    throw std::invalid_argument("request: amount must be a finite non-negative kW value");
  }
  if (!(delta >= 0.0 && delta < 1.0)) {
    throw std::invalid_argument("request: delta must lie in [0, 1)");
  }
  if (duration_minutes < kStepMinutes || duration_minutes % kStepMinutes != 0) {
    throw std::invalid_argument("request: duration must be a positive multiple of 5 minutes");
  }
}

void ObjectiveConfig::validate() const {
  if (comfort_weight < 0) {
    throw std::invalid_argument("objective: comfort weight must be non-negative");
  }
  if (!(big_m > 0.0)) {
    throw std::invalid_argument("objective: big-M must be positive");
  }
  if (!(strict_epsilon_f > 0.0 && strict_epsilon_f <= 0.01)) {
    throw std::invalid_argument("objective: strict epsilon must lie in (0, 0.01]");
  }
  if (grid_units_per_kw <= 0) {
    throw std::invalid_argument("objective: grid resolution must be positive");
  }
}

std::vector<ResidentOption> enumerate_options(const ResidentProfile& profile,
                                              const ThermalState& state,
                                              const RewardSchedule& schedule,
                                              const ObjectiveConfig& config, SeasonMode mode) {
  profile.validate();
  state.validate();

  std::optional<int> ac_units;
  std::optional<int> ewh_units;
  if (profile.ac) {
    ac_units = power_to_grid_units(profile.ac->params.power_kw, config.grid_units_per_kw);
    if (!ac_units) {
      throw std::invalid_argument("resident " + profile.id + ": AC power is off the grid");
    }
  }
  if (profile.ewh) {
    ewh_units = power_to_grid_units(profile.ewh->params.power_kw, config.grid_units_per_kw);
    if (!ewh_units) {
      throw std::invalid_argument("resident " + profile.id + ": EWH power is off the grid");
    }
  }

  const std::vector<bool> on_off = {true, false};
  std::vector<ResidentOption> options;
  for (bool ac_on : on_off) {
    if (!profile.ac && !ac_on) continue;
    for (bool ewh_on : on_off) {
      if (!profile.ewh && !ewh_on) continue;

      ResidentOption opt;
      opt.ac_on = ac_on;
      opt.ewh_on = ewh_on;

      ResidentDecision decision;
      std::optional<RateTier> ac_reward_tier;
      std::optional<RateTier> ewh_reward_tier;
      ThermalState predicted = state;
      if (profile.ac) {
        decision.ac_on = ac_on;
        const double t = estimate_ac_temp(state, profile.ac->params, ac_on, mode);
        predicted.room_temp_f = t;
        opt.predicted_room_f = t;
        opt.ac_tier = classify_tier(t, profile.ac->comfort, profile.compromise,
                                    ApplianceKind::Ac, mode);
        if (!ac_on) {
          opt.reduction_units += *ac_units;
          ac_reward_tier = opt.ac_tier;
        }
      }
      if (profile.ewh) {
        decision.ewh_on = ewh_on;
        const double t = estimate_ewh_temp(state, profile.ewh->params, ewh_on);
        predicted.tank_temp_f = t;
        opt.predicted_tank_f = t;
        opt.ewh_tier = classify_tier(t, profile.ewh->comfort, profile.compromise,
                                     ApplianceKind::Ewh, mode);
        if (!ewh_on) {
          opt.reduction_units += *ewh_units;
          ewh_reward_tier = opt.ewh_tier;
        }
      }

      opt.reward = step_reward_microcents(profile, decision, ac_reward_tier, ewh_reward_tier,
                                          schedule, config.grid_units_per_kw);
      opt.cm_total = comfort_margin_total(predicted, profile);
      const double comfort_cost =
          std::min(static_cast<double>(config.comfort_weight) * opt.cm_total * opt.cm_total,
                   kComfortCostCap);
      opt.cost = opt.reward + std::llround(comfort_cost);
      options.push_back(opt);
    }
  }
  return options;
}

ReductionWindow ReductionWindow::from_amount(double amount_kw, double delta, int units_per_kw) {
  // The 1e-9 slack only absorbs double-representation error on window edges
  // that are exactly on the grid.
  const double lo = (1.0 - delta) * amount_kw * units_per_kw;
  const double hi = (1.0 + delta) * amount_kw * units_per_kw;
  ReductionWindow window;
  window.lo_units = static_cast<int>(std::ceil(lo - 1e-9));
  window.hi_units = static_cast<int>(std::floor(hi + 1e-9));
  if (window.lo_units < 0) window.lo_units = 0;
  return window;
}

ReductionWindow ReductionWindow::from_request(const DrrRequest& request, int units_per_kw) {
  return from_amount(request.amount_kw, request.delta, units_per_kw);
}

const ResidentDecision* ControlDecision::find(const std::string& resident) const {
  for (const auto& [id, decision] : entries) {
    if (id == resident) return &decision;
  }
  return nullptr;
}

namespace {

std::vector<int> subset_sums(const std::vector<std::vector<int>>& per_resident_reductions) {
  long long max_total = 0;
  for (const auto& reductions : per_resident_reductions) {
    max_total += *std::max_element(reductions.begin(), reductions.end());
  }
  std::vector<char> reachable(static_cast<size_t>(max_total) + 1, 0);
  reachable[0] = 1;
  for (const auto& reductions : per_resident_reductions) {
    std::vector<char> next(reachable.size(), 0);
    for (size_t r = 0; r < reachable.size(); ++r) {
      if (!reachable[r]) continue;
      for (int red : reductions) {
        const size_t target = r + static_cast<size_t>(red);
        if (target < next.size()) next[target] = 1;
      }
    }
    reachable.swap(next);
  }
  std::vector<int> sums;
  for (size_t r = 0; r < reachable.size(); ++r) {
    if (reachable[r]) sums.push_back(static_cast<int>(r));
  }
  return sums;
}

std::vector<int> distinct_sorted(std::vector<int> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

}  // namespace

std::vector<int> reachable_reduction_units(const std::vector<ResidentOptions>& fleet_options) {
  std::vector<std::vector<int>> per_resident;
  per_resident.reserve(fleet_options.size());
  for (const auto& entry : fleet_options) {
    std::vector<int> reductions;
    for (const auto& opt : entry.options) reductions.push_back(opt.reduction_units);
    per_resident.push_back(distinct_sorted(std::move(reductions)));
  }
  return subset_sums(per_resident);
}

std::vector<int> reachable_reduction_units(const std::vector<ResidentProfile>& profiles,
                                           int units_per_kw) {
  std::vector<std::vector<int>> per_resident;
  per_resident.reserve(profiles.size());
  for (const auto& profile : profiles) {
    int ac_units = 0;
    int ewh_units = 0;
    if (profile.ac) {
      const auto units = power_to_grid_units(profile.ac->params.power_kw, units_per_kw);
      if (!units) {
        throw std::invalid_argument("resident " + profile.id + ": AC power is off the grid");
      }
      ac_units = *units;
    }
    if (profile.ewh) {
      const auto units = power_to_grid_units(profile.ewh->params.power_kw, units_per_kw);
      if (!units) {
        throw std::invalid_argument("resident " + profile.id + ": EWH power is off the grid");
      }
      ewh_units = *units;
    }
    std::vector<int> reductions = {0};
    if (ac_units > 0) reductions.push_back(ac_units);
    if (ewh_units > 0) reductions.push_back(ewh_units);
    if (ac_units > 0 && ewh_units > 0) reductions.push_back(ac_units + ewh_units);
    per_resident.push_back(distinct_sorted(std::move(reductions)));
  }
  return subset_sums(per_resident);
}

InfeasibleInfo describe_infeasible(const std::vector<int>& reachable_units,
                                   const ReductionWindow& window, int units_per_kw) {
  InfeasibleInfo info;
  info.window_lo_kw = grid_units_to_kw(window.lo_units, units_per_kw);
  info.window_hi_kw = grid_units_to_kw(window.hi_units, units_per_kw);
  info.max_reachable_kw =
      reachable_units.empty() ? 0.0 : grid_units_to_kw(reachable_units.back(), units_per_kw);
  for (int units : reachable_units) {
    if (units < window.lo_units) {
      info.nearest_below_kw = grid_units_to_kw(units, units_per_kw);
    } else if (units > window.hi_units && !info.nearest_above_kw) {
      info.nearest_above_kw = grid_units_to_kw(units, units_per_kw);
    }
  }
  char buf[96];
  std::string msg = "no combination of curtailments reaches the requested window ";
  std::snprintf(buf, sizeof(buf), "[%.10g, %.10g] kW; at most %.10g kW can be shed",
                info.window_lo_kw, info.window_hi_kw, info.max_reachable_kw);
  msg += buf;
  if (info.nearest_below_kw) {
    std::snprintf(buf, sizeof(buf), "; nearest reachable below: %.10g kW",
                  *info.nearest_below_kw);
    msg += buf;
  }
  if (info.nearest_above_kw) {
    std::snprintf(buf, sizeof(buf), "; nearest reachable above: %.10g kW",
                  *info.nearest_above_kw);
    msg += buf;
  }
  info.message = msg;
  return info;
}

namespace {

struct PreparedFleet {
  // Residents permuted into tie-break order: most preferred to curtail first.
  std::vector<const ResidentOptions*> residents;
  // Per resident, option indices in tie-break preference order
  // (participating options first, enumeration order within each group).
  std::vector<std::vector<int>> preference;
  std::vector<long long> suffix_max_units;  // suffix_max_units[i]: max sum of residents i..n-1
};

PreparedFleet prepare(const std::vector<ResidentOptions>& fleet_options,
                      const std::vector<std::string>* fairness_order) {
  for (const auto& per_resident : fleet_options) {
    if (per_resident.options.empty()) {
      throw std::invalid_argument("solve: resident " + per_resident.resident +
                                  " has no options");
    }
  }

  PreparedFleet prepared;
  prepared.residents.reserve(fleet_options.size());
  for (const auto& per_resident : fleet_options) prepared.residents.push_back(&per_resident);

  if (fairness_order) {
    std::map<std::string, size_t> rank;
    for (size_t i = 0; i < fairness_order->size(); ++i) {
      rank.emplace((*fairness_order)[i], i);
    }
    std::stable_sort(prepared.residents.begin(), prepared.residents.end(),
                     [&rank](const ResidentOptions* a, const ResidentOptions* b) {
                       auto ia = rank.find(a->resident);
                       auto ib = rank.find(b->resident);
                       const size_t ra = ia == rank.end() ? rank.size() : ia->second;
                       const size_t rb = ib == rank.end() ? rank.size() : ib->second;
                       if (ra != rb) return ra < rb;
                       return a->resident < b->resident;
                     });
  } else {
    std::stable_sort(prepared.residents.begin(), prepared.residents.end(),
                     [](const ResidentOptions* a, const ResidentOptions* b) {
                       return a->resident < b->resident;
                     });
  }

  prepared.preference.resize(prepared.residents.size());
  for (size_t i = 0; i < prepared.residents.size(); ++i) {
    const auto& options = prepared.residents[i]->options;
    auto& order = prepared.preference[i];
    for (int k = 0; k < static_cast<int>(options.size()); ++k) {
      if (options[k].participates()) order.push_back(k);
    }
    for (int k = 0; k < static_cast<int>(options.size()); ++k) {
      if (!options[k].participates()) order.push_back(k);
    }
  }

  prepared.suffix_max_units.assign(prepared.residents.size() + 1, 0);
  for (size_t i = prepared.residents.size(); i-- > 0;) {
    int best = 0;
    for (const auto& opt : prepared.residents[i]->options) {
      best = std::max(best, opt.reduction_units);
    }
    prepared.suffix_max_units[i] = prepared.suffix_max_units[i + 1] + best;
  }
  return prepared;
}

SolveResult assemble_result(const PreparedFleet& prepared, const std::vector<int>& chosen,
                            const ObjectiveConfig& config) {
  SolveResult result;
  for (size_t i = 0; i < prepared.residents.size(); ++i) {
    const auto& per_resident = *prepared.residents[i];
    const auto& opt = per_resident.options[static_cast<size_t>(chosen[i])];
    result.total_reduction_units += opt.reduction_units;
    result.objective += opt.cost;
    result.per_resident.push_back(ChosenOption{per_resident.resident, opt});
  }
  // Report in a stable id order regardless of the fairness permutation.
  std::sort(result.per_resident.begin(), result.per_resident.end(),
            [](const ChosenOption& a, const ChosenOption& b) { return a.resident < b.resident; });
  for (const auto& chosen_option : result.per_resident) {
    ResidentDecision decision;
    if (chosen_option.option.predicted_room_f) decision.ac_on = chosen_option.option.ac_on;
    if (chosen_option.option.predicted_tank_f) decision.ewh_on = chosen_option.option.ewh_on;
    result.decision.entries.emplace_back(chosen_option.resident, decision);
  }
  result.total_reduction_kw =
      grid_units_to_kw(result.total_reduction_units, config.grid_units_per_kw);
  return result;
}

}  // namespace

SolveOutcome solve_step(const std::vector<ResidentOptions>& fleet_options,
                        const ReductionWindow& window, const ObjectiveConfig& config,
                        const std::vector<std::string>* fairness_order) {
  config.validate();
  PreparedFleet prepared = prepare(fleet_options, fairness_order);
  const size_t n = prepared.residents.size();

  const auto infeasible = [&]() {
    SolveOutcome outcome;
    outcome.infeasible = describe_infeasible(reachable_reduction_units(fleet_options), window,
                                             config.grid_units_per_kw);
    return outcome;
  };

  if (window.empty()) return infeasible();

  // suffix[i][r] = minimal cost of assigning one option to each of the
  // residents i..n-1 so that their reductions sum to exactly r.
  std::vector<std::vector<Microcents>> suffix(n + 1);
  suffix[n] = {0};
  for (size_t i = n; i-- > 0;) {
    const auto& options = prepared.residents[i]->options;
    const auto& rest = suffix[i + 1];
    auto& row = suffix[i];
    row.assign(static_cast<size_t>(prepared.suffix_max_units[i]) + 1, kInfCost);
    for (const auto& opt : options) {
      const size_t shift = static_cast<size_t>(opt.reduction_units);
      for (size_t r = 0; r < rest.size(); ++r) {
        if (rest[r] >= kInfCost) continue;
        const Microcents cand = rest[r] + opt.cost;
        if (cand < row[r + shift]) row[r + shift] = cand;
      }
    }
  }

  // Best cost over the in-window sums.
  const int lo = std::max(window.lo_units, 0);
  const int hi = std::min<long long>(window.hi_units, prepared.suffix_max_units[0]);
  Microcents best = kInfCost;
  for (int r = lo; r <= hi; ++r) {
    best = std::min(best, suffix[0][static_cast<size_t>(r)]);
  }
  if (best >= kInfCost) return infeasible();

  // Walk forward through the tie-break ordering, keeping every prefix on an
  // optimal completion. Preferring a participating option whenever one still
  // completes optimally realizes the lower-participation-first rule.
  std::vector<int> chosen(n, 0);
  Microcents remaining = best;
  int used_units = 0;
  for (size_t i = 0; i < n; ++i) {
    const auto& options = prepared.residents[i]->options;
    const auto& rest = suffix[i + 1];
    bool found = false;
    for (int k : prepared.preference[i]) {
      const auto& opt = options[static_cast<size_t>(k)];
      const long long rest_lo =
          std::max<long long>(0, static_cast<long long>(window.lo_units) - used_units -
                                     opt.reduction_units);
      const long long rest_hi =
          std::min<long long>(static_cast<long long>(rest.size()) - 1,
                              static_cast<long long>(window.hi_units) - used_units -
                                  opt.reduction_units);
      if (rest_lo > rest_hi) continue;
      Microcents rest_best = kInfCost;
      for (long long r = rest_lo; r <= rest_hi; ++r) {
        rest_best = std::min(rest_best, rest[static_cast<size_t>(r)]);
      }
      if (rest_best >= kInfCost) continue;
      if (opt.cost + rest_best == remaining) {
        chosen[i] = k;
        remaining -= opt.cost;
        used_units += opt.reduction_units;
        found = true;
        break;
      }
    }
    if (!found) {
      throw std::logic_error("solve_step: reconstruction lost the optimal path");
    }
  }

  SolveOutcome outcome;
  outcome.solution = assemble_result(prepared, chosen, config);
  return outcome;
}

SolveOutcome solve_exhaustive(const std::vector<ResidentOptions>& fleet_options,
                              const ReductionWindow& window, const ObjectiveConfig& config) {
  config.validate();
  int binary_count = 0;
  for (const auto& per_resident : fleet_options) {
    if (per_resident.options.empty()) {
      throw std::invalid_argument("solve: resident " + per_resident.resident +
                                  " has no options");
    }
    binary_count += per_resident.options.size() > 2 ? 2 : 1;
  }
  if (binary_count > 24) {
    throw std::invalid_argument("solve_exhaustive: instance exceeds the 24-binary guard");
  }

  PreparedFleet prepared = prepare(fleet_options, nullptr);
  const size_t n = prepared.residents.size();

  std::vector<int> current(n, 0);
  std::vector<int> best_choice;
  Microcents best_cost = kInfCost;

  // Depth-first product walk over all option combinations.
  auto recurse = [&](auto&& self, size_t i, Microcents cost, int units) -> void {
    if (cost >= best_cost) return;  // equal keeps the first-found assignment
    if (units > window.hi_units) return;
    if (units + prepared.suffix_max_units[i] < window.lo_units) return;
    if (i == n) {
      if (window.contains(units)) {
        best_cost = cost;
        best_choice = current;
      }
      return;
    }
    const auto& options = prepared.residents[i]->options;
    for (int k = 0; k < static_cast<int>(options.size()); ++k) {
      current[i] = k;
      self(self, i + 1, cost + options[static_cast<size_t>(k)].cost,
           units + options[static_cast<size_t>(k)].reduction_units);
    }
  };
  if (!window.empty()) recurse(recurse, 0, 0, 0);

  SolveOutcome outcome;
  if (best_choice.empty() && best_cost >= kInfCost) {
    outcome.infeasible = describe_infeasible(reachable_reduction_units(fleet_options), window,
                                             config.grid_units_per_kw);
  } else {
    outcome.solution = assemble_result(prepared, best_choice, config);
  }
  return outcome;
}

}  // namespace rla

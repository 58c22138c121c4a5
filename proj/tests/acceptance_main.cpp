// Acceptance suite: prints one PASS/FAIL line per criterion and exits with
// the number of failed criteria. Every tolerance is pinned in code below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rla/dispatch.hpp"
#include "rla/fleet.hpp"
#include "rla/lp_eval.hpp"
#include "rla/milp.hpp"
#include "rla/report.hpp"
#include "rla/rng.hpp"
#include "rla/solver.hpp"
#include "test_support.hpp"

using namespace rla;

namespace {

// Documented scenario assumptions for the ten-resident fixture sessions:
// constant ambient, default schedule and objective weights.
constexpr double kFixtureAmbientF = 95.0;
const RewardSchedule kSchedule{10.0, 20.0, 30.0};
const ObjectiveConfig kConfig{};  // comfort weight 100 micro-cents, 0.1 kW grid

const std::string kFixturePath = std::string(RLA_SOURCE_DIR) + "/data/table3.csv";

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool condition, const std::string& label) {
    notes.push_back(std::string(condition ? "  [ok] " : "  [FAIL] ") + label);
    pass = pass && condition;
  }
  void note(const std::string& label) { notes.push_back("  [--] " + label); }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

ScenarioConfig fixture_scenario() {
  ScenarioConfig scenario;
  scenario.ambient_trajectory_f = {kFixtureAmbientF};
  scenario.schedule = kSchedule;
  scenario.objective = kConfig;
  return scenario;
}

// generator recipe for the sweep-trend fleet: weak ACs relative to the
// ambient pull, so curtailment strictly trades comfort for reward
GeneratorSpec sweep_fleet_spec() {
  GeneratorSpec spec;
  spec.count = 100;
  spec.seed = 424242;
  spec.ac_probability = 1.0;
  spec.ewh_probability = 0.0;
  spec.compromise_probability = 0.4;
  spec.ac_power_kw = {0.8, 2.0};
  spec.ac_low_f = {68.0, 72.0};
  spec.ac_width_f = {6.0, 10.0};
  spec.ac_effect_f_per_kw = {0.6, 1.2};
  spec.ac_loss_rate = {0.2, 0.3};
  return spec;
}

GeneratorSpec scale_fleet_spec() {
  GeneratorSpec spec;
  spec.count = 500;
  spec.seed = 77;
  spec.ac_probability = 1.0;
  spec.ewh_probability = 0.5;
  return spec;
}

// ---------------------------------------------------------------------------

Outcome criterion_oracle_equivalence() {
  Outcome outcome;
  const auto start = std::chrono::steady_clock::now();
  SplitMix64 rng(20240801);
  int instances = 0, feasible = 0, infeasible = 0, mismatches = 0;
  for (int i = 0; i < 200; ++i) {
    auto instance = rla::testing::random_instance(rng, 8);
    auto options = rla::testing::instance_options(instance, kSchedule, kConfig);
    const double max_kw = rla::testing::max_reduction_kw(instance);
    const double amount =
        rng.bernoulli(0.2) ? max_kw + rng.uniform(0.1, 2.0) : rng.uniform(0.0, max_kw);
    const double delta = rng.bernoulli(0.25) ? 0.0 : rng.uniform(0.01, 0.12);
    const auto window = ReductionWindow::from_amount(amount, delta, kConfig.grid_units_per_kw);

    const auto fast = solve_step(options, window, kConfig);
    const auto slow = solve_exhaustive(options, window, kConfig);
    ++instances;
    if (fast.feasible() != slow.feasible()) {
      ++mismatches;
      continue;
    }
    if (!fast.feasible()) {
      ++infeasible;
      continue;
    }
    ++feasible;
    if (fast.solution->objective != slow.solution->objective) ++mismatches;
    if (!window.contains(fast.solution->total_reduction_units)) ++mismatches;
  }
  const double elapsed = seconds_since(start);
  outcome.check(instances == 200, "200 seeded instances solved (" +
                                      std::to_string(feasible) + " feasible, " +
                                      std::to_string(infeasible) + " infeasible)");
  outcome.check(mismatches == 0, "exact objective and feasibility agreement with the "
                                 "exhaustive oracle");
  outcome.check(elapsed < 10.0, "runtime " + fmt("%.2f", elapsed) + " s < 10 s");
  return outcome;
}

Outcome criterion_window_soundness() {
  Outcome outcome;
  int steps_checked = 0, violations = 0;
  const double delta = 0.05;

  const auto check_session = [&](const Fleet& fleet, double amount, int duration,
                                 const ScenarioConfig& scenario) {
    DrrRequest request{amount, delta, duration, SeasonMode::Cooling};
    SessionReport report = run_session(fleet, request, scenario);
    for (double tdr : report.tdr_trace_kw) {
      ++steps_checked;
      if (tdr < (1.0 - delta) * amount - 1e-9 || tdr > (1.0 + delta) * amount + 1e-9) {
        ++violations;
      }
    }
  };

  Fleet fixture = load_fleet(kFixturePath);
  check_session(fixture, 4.0, 20, fixture_scenario());
  check_session(fixture, 8.0, 20, fixture_scenario());
  check_session(fixture, 6.5, 60, fixture_scenario());

  Fleet synthetic = generate_fleet(sweep_fleet_spec());
  for (double amount : {10.0, 40.0, 90.0, 130.0}) {
    check_session(synthetic, amount, 30, fixture_scenario());
  }

  outcome.check(steps_checked >= 40, std::to_string(steps_checked) + " feasible steps checked");
  outcome.check(violations == 0, "0 window violations at delta=0.05");
  return outcome;
}

SessionReport fixture_session(double amount_kw) {
  Fleet fleet = load_fleet(kFixturePath);
  DrrRequest request{amount_kw, 0.05, 20, SeasonMode::Cooling};
  return run_session(fleet, request, fixture_scenario());
}

Outcome criterion_fixture_session_structure(const SessionReport& report) {
  Outcome outcome;
  outcome.note("assumptions: constant ambient " + fmt("%.0f", kFixtureAmbientF) +
               " F, comfort weight " + std::to_string(kConfig.comfort_weight) +
               " microcents, schedule 10/20/30");
  outcome.check(!report.aborted && report.steps_completed == 4,
                "4 kW / 20 min session runs 4 steps");

  bool r1_only = true;
  bool zero_reward_3_5 = true;
  int below_100 = 0;
  for (const auto& stats : report.residents) {
    for (RateTier tier : stats.tiers_seen) {
      if (tier != RateTier::R1Common) r1_only = false;
    }
    if ((stats.id == "3" || stats.id == "5") && stats.total_reward != 0) {
      zero_reward_3_5 = false;
    }
    if (stats.cmft_percent < 100.0) ++below_100;
  }
  outcome.check(r1_only, "every paid tier is R1");
  outcome.check(zero_reward_3_5, "residents 3 and 5 receive zero reward");
  outcome.check(below_100 == 0,
                "100% comfort for all residents (actual: " + std::to_string(below_100) +
                    " residents below, session average " +
                    fmt("%.1f", report.average_cmft_percent) + "%)");
  return outcome;
}

Outcome criterion_compromise_structure(const SessionReport& session4,
                                       const SessionReport& session8) {
  Outcome outcome;
  outcome.check(!session8.aborted && session8.steps_completed == 4,
                "8 kW / 20 min session runs 4 steps");

  int r2_residents = 0;
  bool r2_only_on_compromise = true;
  bool discomfort_only_on_compromise = true;
  for (const auto& stats : session8.residents) {
    for (RateTier tier : stats.tiers_seen) {
      if (tier == RateTier::R2Compromised) {
        ++r2_residents;
        if (!stats.compromise) r2_only_on_compromise = false;
      }
    }
    if (stats.cmft_percent < 100.0 && !stats.compromise) {
      discomfort_only_on_compromise = false;
      outcome.note("non-compromising resident " + stats.id + " at " +
                   fmt("%.0f", stats.cmft_percent) + "% comfort");
    }
  }
  outcome.check(r2_residents >= 1, "at least one R2-tier payment occurs (" +
                                       std::to_string(r2_residents) + " residents)");
  outcome.check(r2_only_on_compromise, "R2 payments go only to compromise=1 residents");
  outcome.check(discomfort_only_on_compromise,
                "every resident below 100% comfort has compromise=1");
  const double ratio = microcents_to_cents(session8.total_reward) /
                       microcents_to_cents(session4.total_reward);
  outcome.note("session reward ratio 8kW/4kW = " + fmt("%.2f", ratio) +
               " under the stated assumptions (reported, no tolerance)");
  return outcome;
}

Outcome criterion_sweep_trends() {
  Outcome outcome;
  const auto start = std::chrono::steady_clock::now();
  Fleet fleet = generate_fleet(sweep_fleet_spec());
  const std::vector<double> amounts = {0.0, 20.0, 40.0, 60.0, 80.0};
  const std::vector<int> durations = {5, 10, 15, 20, 25};
  auto cells = run_sweep(fleet, amounts, durations, 0.05, SeasonMode::Cooling,
                         fixture_scenario());

  const auto cell = [&](size_t i, size_t j) -> const SweepCell& {
    return cells[i * durations.size() + j];
  };
  int infeasible = 0, reward_violations = 0, cmft_violations = 0;
  for (size_t i = 0; i < amounts.size(); ++i) {
    for (size_t j = 0; j < durations.size(); ++j) {
      const auto& c = cell(i, j);
      if (!c.feasible) ++infeasible;
      if (i > 0) {
        if (c.total_reward < cell(i - 1, j).total_reward) ++reward_violations;
        if (c.average_cmft_percent > cell(i - 1, j).average_cmft_percent + 1e-9) {
          ++cmft_violations;
        }
      }
      if (j > 0) {
        if (c.total_reward < cell(i, j - 1).total_reward) ++reward_violations;
        if (c.average_cmft_percent > cell(i, j - 1).average_cmft_percent + 1e-9) {
          ++cmft_violations;
        }
      }
    }
  }
  const double elapsed = seconds_since(start);
  outcome.check(infeasible == 0, "all 25 cells feasible on the seeded 100-resident fleet");
  outcome.check(reward_violations == 0, "total reward non-decreasing along both axes");
  outcome.check(cmft_violations == 0, "average comfort non-increasing along both axes");
  outcome.check(elapsed < 60.0, "runtime " + fmt("%.2f", elapsed) + " s < 60 s");
  return outcome;
}

Outcome criterion_scale_timing() {
  Outcome outcome;
  Fleet fleet = generate_fleet(scale_fleet_spec());
  outcome.note("500 residents, " + fmt("%.1f", fleet.total_curtailable_kw()) +
               " kW curtailable");

  auto start = std::chrono::steady_clock::now();
  SessionReport single =
      run_session(fleet, DrrRequest{500.0, 0.05, 5, SeasonMode::Cooling}, fixture_scenario());
  const double single_s = seconds_since(start);
  outcome.check(!single.aborted, "500 kW single-step request is feasible");
  outcome.check(single_s <= 1.0, "single-step solve " + fmt("%.3f", single_s) + " s <= 1 s");

  start = std::chrono::steady_clock::now();
  SessionReport hour =
      run_session(fleet, DrrRequest{500.0, 0.05, 60, SeasonMode::Cooling}, fixture_scenario());
  const double hour_s = seconds_since(start);
  outcome.check(!hour.aborted && hour.steps_completed == 12, "12-step session completes");
  outcome.check(hour_s <= 15.0, "12-step session " + fmt("%.3f", hour_s) + " s <= 15 s");
  return outcome;
}

Outcome criterion_milp_consistency() {
  Outcome outcome;
  SplitMix64 rng(4242);
  int exported = 0, objective_mismatches = 0, constraint_violations = 0;
  while (exported < 20) {
    auto instance = rla::testing::random_instance(rng, 6);
    const double max_kw = rla::testing::max_reduction_kw(instance);
    DrrRequest request{rng.uniform(0.0, max_kw), 0.05, 5, SeasonMode::Cooling};
    auto options = rla::testing::instance_options(instance, kSchedule, kConfig);
    auto outcome_step =
        solve_step(options, ReductionWindow::from_request(request, kConfig.grid_units_per_kw),
                   kConfig);
    if (!outcome_step.feasible()) continue;
    ++exported;

    const std::string text =
        export_milp(instance.profiles, instance.states, request, kSchedule, kConfig);
    const lp::Model model = lp::parse(text);
    lp::Assignment assignment;
    for (const auto& [name, value] :
         milp_assignment(instance.profiles, instance.states, *outcome_step.solution, request,
                         kConfig)) {
      assignment[name] = value;
    }
    const double internal = microcents_to_cents(outcome_step.solution->objective);
    const double external = lp::evaluate(model.objective, assignment);
    if (std::abs(external - internal) > 1e-6 * std::max(1.0, std::abs(internal))) {
      ++objective_mismatches;
    }
    constraint_violations += static_cast<int>(lp::check(model, assignment, 1e-6).size());
  }
  outcome.check(exported == 20, "20 seeded instances exported and re-evaluated");
  outcome.check(objective_mismatches == 0,
                "file objective matches the solver within 1e-6 relative");
  outcome.check(constraint_violations == 0,
                "indicator and linking constraints hold at the solved assignment");
  return outcome;
}

Outcome criterion_invariant_suite() {
  Outcome outcome;
  SplitMix64 rng(20240802);

  // comfort margin symmetry and affine invariance
  int comfort_failures = 0;
  for (int i = 0; i < 150; ++i) {
    const double low = rng.uniform(40.0, 90.0);
    const double high = low + rng.uniform(0.5, 40.0);
    const ComfortRange range{low, high};
    const double temp = rng.uniform(low - 20.0, high + 20.0);
    const double mirrored = comfort_margin_component(low + high - temp, range);
    if (std::abs(mirrored - comfort_margin_component(temp, range)) > 1e-9) ++comfort_failures;
    const double scale = rng.uniform(0.2, 4.0);
    const double shift = rng.uniform(-40.0, 40.0);
    const ComfortRange mapped{scale * low + shift, scale * high + shift};
    if (std::abs(comfort_margin_component(scale * temp + shift, mapped) -
                 comfort_margin_component(temp, range)) > 1e-7) {
      ++comfort_failures;
    }
  }
  outcome.check(comfort_failures == 0, "comfort margin symmetry + affine invariance (150 cases)");

  // tier exclusivity
  int tier_failures = 0;
  for (int i = 0; i < 150; ++i) {
    const double low = rng.uniform(55.0, 75.0);
    const ComfortRange range{low, low + rng.uniform(1.0, 20.0)};
    const double temp = rng.uniform(low - 25.0, low + 45.0);
    const bool compromise = rng.bernoulli(0.5);
    const RateTier tier =
        classify_tier(temp, range, compromise, ApplianceKind::Ac, SeasonMode::Cooling);
    if (compromise && tier == RateTier::R3Emergency) ++tier_failures;
    if (!compromise && tier == RateTier::R2Compromised) ++tier_failures;
    if ((tier == RateTier::R1Common) != (comfort_margin_component(temp, range) <= 1.0)) {
      ++tier_failures;
    }
  }
  outcome.check(tier_failures == 0, "tier classification exclusivity (150 cases)");

  // ledger replay determinism
  int ledger_failures = 0;
  for (int round = 0; round < 100; ++round) {
    std::vector<std::vector<StepEntry>> script;
    const int steps = 1 + static_cast<int>(rng.next() % 6);
    for (int s = 0; s < steps; ++s) {
      std::vector<StepEntry> entries;
      for (int r = 0; r < 4; ++r) {
        if (!rng.bernoulli(0.6)) continue;
        StepEntry entry;
        entry.resident = "r" + std::to_string(r);
        entry.reward = static_cast<Microcents>(rng.next() % 100000);
        entry.participated = rng.bernoulli(0.5);
        if (entry.participated) {
          entry.tiers.emplace_back(ApplianceKind::Ac, static_cast<RateTier>(rng.next() % 3));
        }
        entries.push_back(entry);
      }
      script.push_back(entries);
    }
    const auto replay = [&script]() {
      RewardLedger ledger;
      for (int r = 0; r < 4; ++r) ledger.register_resident("r" + std::to_string(r));
      for (size_t s = 0; s < script.size(); ++s) {
        ledger.record_step(static_cast<int>(s), script[s]);
      }
      return ledger;
    };
    if (!(replay() == replay())) ++ledger_failures;
  }
  outcome.check(ledger_failures == 0, "ledger replay determinism (100 scripts)");

  // argmin stability under joint rate scaling
  int argmin_failures = 0;
  int argmin_feasible = 0;
  for (int i = 0; i < 150; ++i) {
    auto instance = rla::testing::random_instance(rng, 6);
    const double max_kw = rla::testing::max_reduction_kw(instance);
    const auto window =
        ReductionWindow::from_amount(rng.uniform(0.0, max_kw), 0.08, kConfig.grid_units_per_kw);
    auto base_options = rla::testing::instance_options(instance, kSchedule, kConfig);
    const RewardSchedule scaled_schedule{2 * kSchedule.r1_cents, 2 * kSchedule.r2_cents,
                                         2 * kSchedule.r3_cents};
    ObjectiveConfig scaled_config = kConfig;
    scaled_config.comfort_weight = 2 * kConfig.comfort_weight;
    auto scaled_options =
        rla::testing::instance_options(instance, scaled_schedule, scaled_config);
    auto base = solve_step(base_options, window, kConfig);
    auto scaled = solve_step(scaled_options, window, scaled_config);
    if (base.feasible() != scaled.feasible()) {
      ++argmin_failures;
      continue;
    }
    if (!base.feasible()) continue;
    ++argmin_feasible;
    if (!(base.solution->decision.entries == scaled.solution->decision.entries)) {
      ++argmin_failures;
    }
  }
  outcome.check(argmin_failures == 0 && argmin_feasible >= 100,
                "argmin stable under joint rate scaling (" + std::to_string(argmin_feasible) +
                    " feasible cases)");

  // session determinism, with and without disturbance
  Fleet fixture = load_fleet(kFixturePath);
  int session_failures = 0;
  for (int i = 0; i < 100; ++i) {
    ScenarioConfig scenario = fixture_scenario();
    scenario.seed = rng.next();
    scenario.disturbance.amplitude_f = rng.bernoulli(0.5) ? 0.3 : 0.0;
    DrrRequest request{4.0, 0.05, 20, SeasonMode::Cooling};
    ReportMeta meta{request, scenario};
    const std::string a = session_to_json(run_session(fixture, request, scenario), meta);
    const std::string b = session_to_json(run_session(fixture, request, scenario), meta);
    if (a != b) ++session_failures;
  }
  outcome.check(session_failures == 0, "session determinism (100 replays)");
  return outcome;
}

}  // namespace

int main() {
  struct Row {
    int number;
    std::string name;
    Outcome outcome;
  };
  std::vector<Row> rows;

  rows.push_back({1, "solver matches the exhaustive oracle", criterion_oracle_equivalence()});
  rows.push_back({2, "reduction window soundness", criterion_window_soundness()});

  SessionReport session4 = fixture_session(4.0);
  SessionReport session8 = fixture_session(8.0);
  rows.push_back({3, "fixture 4kW/20min session structure",
                  criterion_fixture_session_structure(session4)});
  rows.push_back({4, "fixture 8kW/20min compromise structure",
                  criterion_compromise_structure(session4, session8)});
  rows.push_back({5, "sweep comfort/reward trends", criterion_sweep_trends()});
  rows.push_back({6, "500-resident scale and timing", criterion_scale_timing()});
  rows.push_back({7, "exported MILP reproduces the solver", criterion_milp_consistency()});
  rows.push_back({8, "module invariant suite", criterion_invariant_suite()});

  int failed = 0;
  for (const auto& row : rows) {
    std::printf("[%s] criterion %d: %s\n", row.outcome.pass ? "PASS" : "FAIL", row.number,
                row.name.c_str());
    for (const auto& note : row.outcome.notes) std::printf("%s\n", note.c_str());
    if (!row.outcome.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(rows.size()) - failed, rows.size());
  return failed;
}

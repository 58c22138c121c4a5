#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rla/rewards.hpp"
#include "rla/rng.hpp"
#include "test_support.hpp"

using namespace rla;

namespace {
const RewardSchedule kSchedule{10.0, 20.0, 30.0};
}

TEST_CASE("tier classification follows the comfort margin rule") {
  ComfortRange narrow{70.0, 75.0};
  CHECK(classify_tier(74.0, narrow, false, ApplianceKind::Ac, SeasonMode::Cooling) ==
        RateTier::R1Common);
  CHECK(classify_tier(74.0, narrow, true, ApplianceKind::Ac, SeasonMode::Cooling) ==
        RateTier::R1Common);

  ComfortRange wide{65.0, 75.0};
  CHECK(classify_tier(80.2, wide, true, ApplianceKind::Ac, SeasonMode::Cooling) ==
        RateTier::R2Compromised);
  CHECK(classify_tier(80.2, wide, false, ApplianceKind::Ac, SeasonMode::Cooling) ==
        RateTier::R3Emergency);
}

TEST_CASE("tier boundary: margin exactly 1 is still the common rate") {
  ComfortRange range{70.0, 75.0};
  CHECK(classify_tier(75.0, range, false, ApplianceKind::Ac, SeasonMode::Cooling) ==
        RateTier::R1Common);
  CHECK(classify_tier(70.0, range, true, ApplianceKind::Ewh, SeasonMode::Heating) ==
        RateTier::R1Common);
}

TEST_CASE("tier exclusivity: R2 only with consent, R3 only without") {
  SplitMix64 rng(21);
  for (int i = 0; i < 200; ++i) {
    const double low = rng.uniform(55.0, 75.0);
    ComfortRange range{low, low + rng.uniform(1.0, 20.0)};
    const double temp = rng.uniform(low - 25.0, low + 45.0);
    const bool compromise = rng.bernoulli(0.5);
    const RateTier tier =
        classify_tier(temp, range, compromise, ApplianceKind::Ac, SeasonMode::Cooling);
    if (compromise) CHECK(tier != RateTier::R3Emergency);
    else CHECK(tier != RateTier::R2Compromised);
    const bool in_margin = comfort_margin_component(temp, range) <= 1.0;
    CHECK((tier == RateTier::R1Common) == in_margin);
  }
}

TEST_CASE("step reward: nothing curtailed pays nothing") {
  auto profile = testing::ac_resident("1", 1.3, 70, 75);
  ResidentDecision all_on{true, std::nullopt};
  CHECK(step_reward_microcents(profile, all_on, std::nullopt, std::nullopt, kSchedule) == 0);
}

TEST_CASE("step reward: curtailed AC pays power times tier rate") {
  auto profile = testing::ac_resident("1", 1.3, 70, 75);
  ResidentDecision ac_off{false, std::nullopt};
  // 1.3 kW * 10 cents = 13 cents
  CHECK(step_reward_microcents(profile, ac_off, RateTier::R1Common, std::nullopt, kSchedule) ==
        13 * kMicrocentsPerCent);

  auto bigger = testing::ac_resident("2", 1.6, 65, 75, 6.0, 0.3, true);
  // 1.6 kW * 20 cents = 32 cents
  CHECK(step_reward_microcents(bigger, ac_off, RateTier::R2Compromised, std::nullopt, kSchedule) ==
        32 * kMicrocentsPerCent);
}

TEST_CASE("step reward: tiers must cover exactly the curtailed appliances") {
  auto profile = testing::ac_resident("1", 1.3, 70, 75);
  ResidentDecision ac_off{false, std::nullopt};
  CHECK_THROWS_AS(
      step_reward_microcents(profile, ac_off, std::nullopt, std::nullopt, kSchedule),
      std::invalid_argument);
  ResidentDecision all_on{true, std::nullopt};
  CHECK_THROWS_AS(
      step_reward_microcents(profile, all_on, RateTier::R1Common, std::nullopt, kSchedule),
      std::invalid_argument);
}

TEST_CASE("step reward is linear in the schedule") {
  SplitMix64 rng(22);
  for (int i = 0; i < 100; ++i) {
    const double power = 0.1 * (1 + static_cast<int>(rng.next() % 40));
    auto profile = testing::ac_resident("1", power, 70, 75);
    profile.ewh = EwhUnit{EwhParams{4.0, 1.5, 0.05}, ComfortRange{110, 130}};
    ResidentDecision both_off{false, false};
    const auto tier_a = static_cast<RateTier>(rng.next() % 3);
    const auto tier_e = static_cast<RateTier>(rng.next() % 3);
    // rates live on a 0.01-cent grid; the micro-cent conversion is exact there
    const double r1 = 0.01 * (100 + static_cast<int>(rng.next() % 1400));
    const RewardSchedule base{r1, r1 + 0.01 * (50 + static_cast<int>(rng.next() % 1000)),
                              r1 + 0.01 * (1100 + static_cast<int>(rng.next() % 900))};
    const RewardSchedule doubled{2 * base.r1_cents, 2 * base.r2_cents, 2 * base.r3_cents};
    CHECK(step_reward_microcents(profile, both_off, tier_a, tier_e, doubled) ==
          2 * step_reward_microcents(profile, both_off, tier_a, tier_e, base));
  }
}

TEST_CASE("ledger: cumulative totals and participation counting") {
  RewardLedger ledger;
  ledger.register_resident("1");
  ledger.register_resident("2");

  // zero-reward, no participation
  ledger.record_step(0, {StepEntry{"1", 0, false, {}}});
  CHECK(ledger.record("1").participation_count == 0);
  CHECK(ledger.record("1").cumulative == 0);

  // two 13-cent steps accumulate to 26 cents
  StepEntry curtailed{"1", 13 * kMicrocentsPerCent, true,
                      {{ApplianceKind::Ac, RateTier::R1Common}}};
  ledger.record_step(1, {curtailed});
  ledger.record_step(2, {curtailed});
  CHECK(ledger.record("1").cumulative == 26 * kMicrocentsPerCent);
  CHECK(ledger.record("1").participation_count == 2);
  CHECK(ledger.total() == 26 * kMicrocentsPerCent);

  // one step with both appliances curtailed still counts one participation
  StepEntry both{"2",
                 20 * kMicrocentsPerCent,
                 true,
                 {{ApplianceKind::Ac, RateTier::R1Common}, {ApplianceKind::Ewh, RateTier::R1Common}}};
  ledger.record_step(3, {both});
  CHECK(ledger.record("2").participation_count == 1);
  CHECK(ledger.record("2").tier_history.size() == 2);
}

TEST_CASE("ledger: duplicate step index and unknown resident are rejected") {
  RewardLedger ledger;
  ledger.register_resident("1");
  ledger.record_step(0, {});
  CHECK_THROWS_AS(ledger.record_step(0, {}), std::invalid_argument);
  CHECK_THROWS_AS(ledger.record_step(1, {StepEntry{"ghost", 0, false, {}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ledger.fairness_key("ghost"), std::invalid_argument);
}

TEST_CASE("ledger replay determinism") {
  SplitMix64 rng(23);
  for (int round = 0; round < 100; ++round) {
    std::vector<std::vector<StepEntry>> script;
    const int steps = 1 + static_cast<int>(rng.next() % 6);
    for (int s = 0; s < steps; ++s) {
      std::vector<StepEntry> entries;
      for (int r = 0; r < 3; ++r) {
        if (rng.bernoulli(0.7)) {
          StepEntry entry;
          entry.resident = "r" + std::to_string(r);
          entry.reward = static_cast<Microcents>(rng.next() % 1000) * 1000;
          entry.participated = entry.reward > 0;
          if (entry.participated) {
            entry.tiers.emplace_back(ApplianceKind::Ac,
                                     static_cast<RateTier>(rng.next() % 3));
          }
          entries.push_back(std::move(entry));
        }
      }
      script.push_back(std::move(entries));
    }

    const auto replay = [&script]() {
      RewardLedger ledger;
      for (int r = 0; r < 3; ++r) ledger.register_resident("r" + std::to_string(r));
      for (size_t s = 0; s < script.size(); ++s) {
        ledger.record_step(static_cast<int>(s), script[s]);
      }
      return ledger;
    };
    CHECK(replay() == replay());
  }
}

TEST_CASE("fairness key prefers lower participation, then lower id") {
  RewardLedger ledger;
  ledger.register_resident("2");
  ledger.register_resident("3");

  // counts 3 vs 5: the lower-count resident wins
  for (int s = 0; s < 5; ++s) {
    std::vector<StepEntry> entries;
    if (s < 3) entries.push_back(StepEntry{"2", 0, true, {}});
    entries.push_back(StepEntry{"3", 0, true, {}});
    ledger.record_step(s, entries);
  }
  CHECK(ledger.fairness_key("2") < ledger.fairness_key("3"));

  // equal counts: id decides
  RewardLedger fresh;
  fresh.register_resident("a");
  fresh.register_resident("b");
  CHECK(fresh.fairness_key("a") < fresh.fairness_key("b"));
  CHECK(fresh.fairness_key("a").participation_count == 0);
}

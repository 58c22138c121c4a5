#include "rla/rewards.hpp"

#include <cmath>
#include <stdexcept>

namespace rla {

std::string to_string(RateTier tier) {
  switch (tier) {
    case RateTier::R1Common: return "R1";
    case RateTier::R2Compromised: return "R2";
    case RateTier::R3Emergency: return "R3";
  }
  return "?";
}

double rate_cents(const RewardSchedule& schedule, RateTier tier) {
  switch (tier) {
    case RateTier::R1Common: return schedule.r1_cents;
    case RateTier::R2Compromised: return schedule.r2_cents;
    case RateTier::R3Emergency: return schedule.r3_cents;
  }
  return 0.0;
}

Microcents rate_microcents_per_unit(const RewardSchedule& schedule, RateTier tier,
                                    int units_per_kw) {
  return std::llround(rate_cents(schedule, tier) * kMicrocentsPerCent / units_per_kw);
}

RateTier classify_tier(double predicted_temp_f, const ComfortRange& range, bool compromise,
                       ApplianceKind /*kind*/, SeasonMode /*mode*/) {
  const double cm = comfort_margin_component(predicted_temp_f, range);
  if (cm <= 1.0) return RateTier::R1Common;
  return compromise ? RateTier::R2Compromised : RateTier::R3Emergency;
}

Microcents step_reward_microcents(const ResidentProfile& profile, const ResidentDecision& decision,
                                  std::optional<RateTier> ac_tier, std::optional<RateTier> ewh_tier,
                                  const RewardSchedule& schedule, int units_per_kw) {
  Microcents reward = 0;
  const bool ac_curtailed = profile.ac && decision.ac_on && !*decision.ac_on;
  const bool ewh_curtailed = profile.ewh && decision.ewh_on && !*decision.ewh_on;
  if (ac_curtailed != ac_tier.has_value() || ewh_curtailed != ewh_tier.has_value()) {
    throw std::invalid_argument("step_reward: tiers must cover exactly the curtailed appliances");
  }
  if (ac_curtailed) {
    const auto units = power_to_grid_units(profile.ac->params.power_kw, units_per_kw);
    if (!units) throw std::invalid_argument("step_reward: AC power is off the grid");
    reward += *units * rate_microcents_per_unit(schedule, *ac_tier, units_per_kw);
  }
  if (ewh_curtailed) {
    const auto units = power_to_grid_units(profile.ewh->params.power_kw, units_per_kw);
    if (!units) throw std::invalid_argument("step_reward: EWH power is off the grid");
    reward += *units * rate_microcents_per_unit(schedule, *ewh_tier, units_per_kw);
  }
  return reward;
}

void RewardLedger::register_resident(const std::string& id) {
  records_.try_emplace(id);
}

bool RewardLedger::knows(const std::string& id) const {
  return records_.contains(id);
}

void RewardLedger::record_step(int step, const std::vector<StepEntry>& entries) {
  if (step <= last_step_) {
    throw std::invalid_argument("record_step: step index must be strictly increasing");
  }
  for (const auto& entry : entries) {
    auto it = records_.find(entry.resident);
    if (it == records_.end()) {
      throw std::invalid_argument("record_step: unknown resident " + entry.resident);
    }
    auto& rec = it->second;
    if (entry.reward < 0) {
      throw std::invalid_argument("record_step: negative reward for " + entry.resident);
    }
    rec.cumulative += entry.reward;
    if (entry.participated) rec.participation_count += 1;
    for (const auto& [kind, tier] : entry.tiers) {
      rec.tier_history.push_back(TierRecord{step, kind, tier});
    }
  }
  last_step_ = step;
}

FairnessKey RewardLedger::fairness_key(const std::string& id) const {
  return FairnessKey{require(id).participation_count, id};
}

const ResidentRewardRecord& RewardLedger::record(const std::string& id) const {
  return require(id);
}

Microcents RewardLedger::total() const {
  Microcents total = 0;
  for (const auto& [id, rec] : records_) total += rec.cumulative;
  return total;
}

const ResidentRewardRecord& RewardLedger::require(const std::string& id) const {
  auto it = records_.find(id);
  if (it == records_.end()) {
    throw std::invalid_argument("ledger does not know resident " + id);
  }
  return it->second;
}

}  // namespace rla

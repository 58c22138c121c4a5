#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rla/model.hpp"

namespace rla {

// Integer money grid used throughout the optimizer: 1 cent = 1e6 micro-cents.
// Keeping costs integral avoids float comparison ties in the solve.
using Microcents = std::int64_t;
inline constexpr Microcents kMicrocentsPerCent = 1'000'000;

inline double microcents_to_cents(Microcents v) {
  return static_cast<double>(v) / kMicrocentsPerCent;
}

enum class RateTier { R1Common, R2Compromised, R3Emergency };

std::string to_string(RateTier tier);
double rate_cents(const RewardSchedule& schedule, RateTier tier);

/// Reward paid per grid unit of curtailed power at the given tier, as an
/// exact integer amount of micro-cents. Exact for rates with at most five
/// decimal places; anything finer rounds to the nearest micro-cent per unit.
Microcents rate_microcents_per_unit(const RewardSchedule& schedule, RateTier tier,
                                    int units_per_kw = kDefaultGridUnitsPerKw);

/// Tier carried by one appliance for one step, decided on the predicted
/// end-of-step temperature: R1 while the comfort margin stays at or below 1,
/// otherwise R2 for residents who agreed to compromise and R3 for those who
/// did not. `kind` and `mode` only label the record; they do not affect the
/// classification.
RateTier classify_tier(double predicted_temp_f, const ComfortRange& range, bool compromise,
                       ApplianceKind kind, SeasonMode mode);

// Per-resident slice of a control decision. A field is meaningful only when
// the matching appliance exists on the profile.
struct ResidentDecision {
  std::optional<bool> ac_on;
  std::optional<bool> ewh_on;

  bool operator==(const ResidentDecision&) const = default;
};

/// Reward owed to one resident for one step: power times tier rate for each
/// curtailed appliance, zero when nothing was curtailed. Tiers must be
/// supplied for exactly the curtailed appliances.
Microcents step_reward_microcents(const ResidentProfile& profile, const ResidentDecision& decision,
                                  std::optional<RateTier> ac_tier, std::optional<RateTier> ewh_tier,
                                  const RewardSchedule& schedule,
                                  int units_per_kw = kDefaultGridUnitsPerKw);

struct TierRecord {
  int step = 0;
  ApplianceKind appliance = ApplianceKind::Ac;
  RateTier tier = RateTier::R1Common;
};

struct ResidentRewardRecord {
  Microcents cumulative = 0;
  int participation_count = 0;  // steps with at least one curtailed appliance
  std::vector<TierRecord> tier_history;
};

// One resident's outcome for one recorded step.
struct StepEntry {
  std::string resident;
  Microcents reward = 0;
  bool participated = false;
  std::vector<std::pair<ApplianceKind, RateTier>> tiers;  // curtailed appliances only
};

// Ordering key for the participation-history fairness rule: residents with
// fewer recorded participations are preferred for the next curtailment, with
// the id as the deterministic final tie-break.
struct FairnessKey {
  int participation_count = 0;
  std::string resident;

  auto operator<=>(const FairnessKey&) const = default;
};

// Cumulative per-resident accounting for one dispatch session. Writes are
// strictly sequential (one step at a time, strictly increasing step index);
// reads are safe between steps.
class RewardLedger {
 public:
  void register_resident(const std::string& id);
  bool knows(const std::string& id) const;

  /// Records one step. Throws when the step index does not increase or an
  /// entry names an unknown resident.
  void record_step(int step, const std::vector<StepEntry>& entries);

  FairnessKey fairness_key(const std::string& id) const;
  const ResidentRewardRecord& record(const std::string& id) const;
  const std::map<std::string, ResidentRewardRecord>& records() const { return records_; }

  Microcents total() const;
  int last_step() const { return last_step_; }

  bool operator==(const RewardLedger&) const = default;

 private:
  const ResidentRewardRecord& require(const std::string& id) const;

  std::map<std::string, ResidentRewardRecord> records_;
  int last_step_ = -1;
};

inline bool operator==(const TierRecord& a, const TierRecord& b) {
  return a.step == b.step && a.appliance == b.appliance && a.tier == b.tier;
}

inline bool operator==(const ResidentRewardRecord& a, const ResidentRewardRecord& b) {
  return a.cumulative == b.cumulative && a.participation_count == b.participation_count &&
         a.tier_history == b.tier_history;
}

}  // namespace rla

#pragma once

#include <optional>
#include <string>

namespace rla {

// One control/estimation step is fixed at five minutes. Loss rates and
// appliance effects are per-step quantities.
inline constexpr int kStepMinutes = 5;

// Appliance powers live on a 0.1 kW grid by default so that subset sums in
// the optimizer are exact integers.
inline constexpr int kDefaultGridUnitsPerKw = 10;

// Temperatures outside this range are rejected at ingestion.
inline constexpr double kMinTempF = -50.0;
inline constexpr double kMaxTempF = 220.0;

enum class SeasonMode { Cooling, Heating };
enum class ApplianceKind { Ac, Ewh };

std::string to_string(SeasonMode mode);
std::string to_string(ApplianceKind kind);
std::optional<SeasonMode> season_mode_from_string(const std::string& text);

/// Converts a kW power to grid units; nullopt when the value does not sit on
/// the grid (within a small representation tolerance).
std::optional<int> power_to_grid_units(double kw, int units_per_kw = kDefaultGridUnitsPerKw);
double grid_units_to_kw(int units, int units_per_kw = kDefaultGridUnitsPerKw);

// Reward rates in cents per (kW * 5-minute step). Tier 1 is the common rate,
// tier 2 pays residents who agreed to compromise, tier 3 is the emergency
// rate for out-of-range operation without consent.
struct RewardSchedule {
  double r1_cents = 10.0;
  double r2_cents = 20.0;
  double r3_cents = 30.0;

  void validate() const;  // requires 0 < r1 < r2 < r3
};

struct AcParams {
  double power_kw = 0.0;         // electrical draw while running
  double effect_f_per_kw = 0.0;  // temperature moved per kW in one step
  double loss_rate = 0.0;        // fraction of the ambient gap closed per step

  void validate() const;
};

struct EwhParams {
  double power_kw = 0.0;
  double effect_f_per_kw = 0.0;
  double loss_rate = 0.0;

  void validate() const;
};

struct ComfortRange {
  double low_f = 0.0;
  double high_f = 0.0;

  void validate() const;  // requires low < high strictly
  double midpoint() const { return 0.5 * (low_f + high_f); }
  double width() const { return high_f - low_f; }
  bool contains(double temp_f) const { return low_f <= temp_f && temp_f <= high_f; }
};

struct AcUnit {
  AcParams params;
  ComfortRange comfort;
};

struct EwhUnit {
  EwhParams params;
  ComfortRange comfort;
};

// One household. At least one appliance must be present. The compromise flag
// is a single per-resident declaration covering both appliances.
struct ResidentProfile {
  std::string id;
  std::optional<AcUnit> ac;
  std::optional<EwhUnit> ewh;
  bool compromise = false;

  void validate() const;
  double curtailable_kw() const;
};

// Temperature snapshot for one household. Fields are present exactly when
// the matching appliance is present on the profile. ambient is the outdoor
// temperature used by both loss terms.
struct ThermalState {
  std::optional<double> room_temp_f;
  std::optional<double> tank_temp_f;
  double ambient_temp_f = 0.0;

  void validate() const;  // finite values inside [kMinTempF, kMaxTempF]
};

/// One-step room temperature estimate under the given AC status.
///
/// T_new = T0 - loss_rate * (T0 - ambient) + s * effect * power * [on]
/// where s = -1 in Cooling mode (a running AC removes heat) and +1 in
/// Heating mode. Throws std::invalid_argument when room_temp is absent.
double estimate_ac_temp(const ThermalState& state, const AcParams& params, bool on,
                        SeasonMode mode);

/// One-step tank temperature estimate under the given EWH status. The
/// heating element always adds heat; there is no mode dependence.
double estimate_ewh_temp(const ThermalState& state, const EwhParams& params, bool on);

/// Normalized distance from the midpoint of a comfort range: 0 at the
/// midpoint, 1 at either boundary, > 1 outside the range.
double comfort_margin_component(double temp_f, const ComfortRange& range);

/// Sum of comfort margins over the appliances present on the profile,
/// evaluated at the temperatures in `state`. An absent appliance
/// contributes zero.
double comfort_margin_total(const ThermalState& state, const ResidentProfile& profile);

}  // namespace rla

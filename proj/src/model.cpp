#include "rla/model.hpp"

#include <cmath>
#include <stdexcept>

namespace rla {

std::string to_string(SeasonMode mode) {
  return mode == SeasonMode::Cooling ? "cooling" : "heating";
}

std::string to_string(ApplianceKind kind) {
  return kind == ApplianceKind::Ac ? "ac" : "ewh";
}

std::optional<SeasonMode> season_mode_from_string(const std::string& text) {
  if (text == "cooling" || text == "summer") return SeasonMode::Cooling;
  if (text == "heating" || text == "winter") return SeasonMode::Heating;
  return std::nullopt;
}

std::optional<int> power_to_grid_units(double kw, int units_per_kw) {
  if (!(std::isfinite(kw)) || kw < 0.0 || units_per_kw <= 0) return std::nullopt;
  const double scaled = kw * units_per_kw;
  const long long units = std::llround(scaled);
  // Tolerate only double-representation error, not genuinely finer values.
  if (std::abs(scaled - static_cast<double>(units)) > 1e-6) return std::nullopt;
  return static_cast<int>(units);
}

double grid_units_to_kw(int units, int units_per_kw) {
  return static_cast<double>(units) / units_per_kw;
}

void RewardSchedule::validate() const {
  if (!(r1_cents > 0.0 && r1_cents < r2_cents && r2_cents < r3_cents)) {
    throw std::invalid_argument("reward schedule must satisfy 0 < r1 < r2 < r3");
  }
}

namespace {

void validate_appliance_params(double power_kw, double effect, double loss_rate,
                               const char* what) {
  if (!(power_kw > 0.0) || !std::isfinite(power_kw)) {
    throw std::invalid_argument(std::string(what) + ": power must be positive");
  }
  if (!(effect > 0.0) || !std::isfinite(effect)) {
    throw std::invalid_argument(std::string(what) + ": effect must be positive");
  }
  if (!(loss_rate >= 0.0 && loss_rate <= 1.0)) {
    throw std::invalid_argument(std::string(what) + ": loss rate must lie in [0, 1]");
  }
}

void validate_temp(double temp_f, const char* what) {
  if (!std::isfinite(temp_f) || temp_f < kMinTempF || temp_f > kMaxTempF) {
    throw std::invalid_argument(std::string(what) + ": temperature out of representable range");
  }
}

}  // namespace

void AcParams::validate() const {
  validate_appliance_params(power_kw, effect_f_per_kw, loss_rate, "ac");
}

void EwhParams::validate() const {
  validate_appliance_params(power_kw, effect_f_per_kw, loss_rate, "ewh");
}

void ComfortRange::validate() const {
  if (!std::isfinite(low_f) || !std::isfinite(high_f) || !(low_f < high_f)) {
    throw std::invalid_argument("comfort range requires low < high");
  }
}

void ResidentProfile::validate() const {
  if (id.empty()) throw std::invalid_argument("resident id must be non-empty");
  if (!ac && !ewh) {
    throw std::invalid_argument("resident " + id + " must own at least one appliance");
  }
  if (ac) {
    ac->params.validate();
    ac->comfort.validate();
  }
  if (ewh) {
    ewh->params.validate();
    ewh->comfort.validate();
  }
}

double ResidentProfile::curtailable_kw() const {
  double total = 0.0;
  if (ac) total += ac->params.power_kw;
  if (ewh) total += ewh->params.power_kw;
  return total;
}

void ThermalState::validate() const {
  if (room_temp_f) validate_temp(*room_temp_f, "room");
  if (tank_temp_f) validate_temp(*tank_temp_f, "tank");
  validate_temp(ambient_temp_f, "ambient");
}

double estimate_ac_temp(const ThermalState& state, const AcParams& params, bool on,
                        SeasonMode mode) {
  if (!state.room_temp_f) {
    throw std::invalid_argument("estimate_ac_temp: state has no room temperature");
  }
  const double t0 = *state.room_temp_f;
  const double sign = mode == SeasonMode::Cooling ? -1.0 : 1.0;
  const double drive = on ? sign * params.effect_f_per_kw * params.power_kw : 0.0;
  return t0 - params.loss_rate * (t0 - state.ambient_temp_f) + drive;
}

double estimate_ewh_temp(const ThermalState& state, const EwhParams& params, bool on) {
  if (!state.tank_temp_f) {
    throw std::invalid_argument("estimate_ewh_temp: state has no tank temperature");
  }
  const double t0 = *state.tank_temp_f;
  const double drive = on ? params.effect_f_per_kw * params.power_kw : 0.0;
  return t0 - params.loss_rate * (t0 - state.ambient_temp_f) + drive;
}

double comfort_margin_component(double temp_f, const ComfortRange& range) {
  return std::abs(2.0 * temp_f - range.low_f - range.high_f) / range.width();
}

double comfort_margin_total(const ThermalState& state, const ResidentProfile& profile) {
  double total = 0.0;
  if (profile.ac) {
    if (!state.room_temp_f) {
      throw std::invalid_argument("comfort_margin_total: profile has an AC but state has no room temperature");
    }
    total += comfort_margin_component(*state.room_temp_f, profile.ac->comfort);
  }
  if (profile.ewh) {
    if (!state.tank_temp_f) {
      throw std::invalid_argument("comfort_margin_total: profile has an EWH but state has no tank temperature");
    }
    total += comfort_margin_component(*state.tank_temp_f, profile.ewh->comfort);
  }
  return total;
}

}  // namespace rla

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rla/model.hpp"

namespace rla {

// Initial appliance temperatures for one resident, as ingested from a fleet
// file. The ambient temperature is a scenario input, not a fleet property.
struct InitialTemps {
  std::optional<double> room_f;
  std::optional<double> tank_f;
};

struct Fleet {
  std::vector<ResidentProfile> profiles;
  std::vector<InitialTemps> initial_temps;  // aligned with profiles

  size_t size() const { return profiles.size(); }
  double total_curtailable_kw() const;
  /// Profiles valid, temps aligned and present exactly for owned appliances.
  void validate() const;
};

// Raised by fleet ingestion with the offending row number in the message.
struct FleetValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kFleetFormatVersion = "rla-fleet-v1";

/// Reads the versioned fleet CSV (header `# rla-fleet-v1`). Column order:
/// id, cop, then the six AC fields (low, high, power_kw, init_f, effect,
/// loss) and the six EWH fields in the same order. An absent appliance
/// leaves all six of its cells empty. Throws FleetValidationError with a row
/// reference on duplicate ids, inverted ranges, off-grid powers, or missing
/// required fields.
Fleet load_fleet_csv(std::istream& in, int grid_units_per_kw = kDefaultGridUnitsPerKw);

/// JSON equivalent of the CSV schema (same fields, grouped per appliance).
Fleet load_fleet_json(std::istream& in, int grid_units_per_kw = kDefaultGridUnitsPerKw);

/// Dispatches on the file extension (.json, anything else reads as CSV).
Fleet load_fleet(const std::filesystem::path& path,
                 int grid_units_per_kw = kDefaultGridUnitsPerKw);

/// Canonical CSV serialization: stable field formatting so that identical
/// fleets serialize to identical bytes.
void save_fleet_csv(const Fleet& fleet, std::ostream& out);
std::string fleet_to_csv(const Fleet& fleet);
std::string fleet_to_json(const Fleet& fleet);

struct FieldRange {
  double lo = 0.0;
  double hi = 0.0;
};

// Sampling recipe for synthetic fleets. Every field is drawn uniformly from
// its documented interval with a SplitMix64 stream, so one (spec, seed) pair
// always produces the same fleet. Residents left with neither appliance by
// the presence draws get an AC.
struct GeneratorSpec {
  int count = 1;
  std::uint64_t seed = 0;
  double ac_probability = 1.0;
  double ewh_probability = 0.0;
  double compromise_probability = 0.5;

  FieldRange ac_power_kw{0.8, 2.0};
  FieldRange ac_low_f{68.0, 72.0};
  FieldRange ac_width_f{6.0, 10.0};
  FieldRange ac_effect_f_per_kw{1.2, 2.2};
  FieldRange ac_loss_rate{0.05, 0.15};

  FieldRange ewh_power_kw{3.5, 5.5};
  FieldRange ewh_low_f{110.0, 118.0};
  FieldRange ewh_width_f{12.0, 20.0};
  FieldRange ewh_effect_f_per_kw{1.0, 2.0};
  FieldRange ewh_loss_rate{0.02, 0.06};

  void validate() const;
};

GeneratorSpec generator_spec_from_json(std::istream& in);
std::string generator_spec_to_json(const GeneratorSpec& spec);

/// Draws a synthetic fleet. The result round-trips through the CSV schema
/// without validation errors.
Fleet generate_fleet(const GeneratorSpec& spec, int grid_units_per_kw = kDefaultGridUnitsPerKw);

}  // namespace rla

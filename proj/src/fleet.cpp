#include "rla/fleet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rla/rng.hpp"

namespace rla {

namespace {

using nlohmann::json;

const char* kCsvHeader =
    "id,cop,ac_low_f,ac_high_f,ac_power_kw,ac_init_f,ac_effect_f_per_kw,ac_loss_rate,"
    "ewh_low_f,ewh_high_f,ewh_power_kw,ewh_init_f,ewh_effect_f_per_kw,ewh_loss_rate";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(trim(cell));
      cell.clear();
    } else {
      cell += c;
    }
  }
  cells.push_back(trim(cell));
  return cells;
}

[[noreturn]] void fail(int row, const std::string& what) {
  throw FleetValidationError("fleet row " + std::to_string(row) + ": " + what);
}

double parse_number(const std::string& cell, int row, const std::string& field) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (cell.empty() || end != cell.c_str() + cell.size() || !std::isfinite(v)) {
    fail(row, "field " + field + " is not a finite number: '" + cell + "'");
  }
  return v;
}

void check_temp(double v, int row, const std::string& field) {
  if (v < kMinTempF || v > kMaxTempF) {
    fail(row, "field " + field + " outside representable temperature range");
  }
}

struct ApplianceFields {
  double low, high, power, init, effect, loss;
};

// Validates one appliance block and returns it, or nullopt when every cell
// is empty.
std::optional<ApplianceFields> read_block(const std::vector<std::string>& cells, size_t start,
                                          const char* prefix, int row, int grid_units_per_kw) {
  bool any = false;
  bool all = true;
  for (size_t k = 0; k < 6; ++k) {
    if (cells[start + k].empty()) all = false;
    else any = true;
  }
  if (!any) return std::nullopt;
  if (!all) fail(row, std::string(prefix) + " block is incomplete (all six fields required)");

  ApplianceFields f{};
  f.low = parse_number(cells[start + 0], row, std::string(prefix) + "_low_f");
  f.high = parse_number(cells[start + 1], row, std::string(prefix) + "_high_f");
  f.power = parse_number(cells[start + 2], row, std::string(prefix) + "_power_kw");
  f.init = parse_number(cells[start + 3], row, std::string(prefix) + "_init_f");
  f.effect = parse_number(cells[start + 4], row, std::string(prefix) + "_effect_f_per_kw");
  f.loss = parse_number(cells[start + 5], row, std::string(prefix) + "_loss_rate");

  if (!(f.low < f.high)) fail(row, std::string(prefix) + " comfort range is inverted");
  check_temp(f.low, row, std::string(prefix) + "_low_f");
  check_temp(f.high, row, std::string(prefix) + "_high_f");
  check_temp(f.init, row, std::string(prefix) + "_init_f");
  if (!(f.power > 0)) fail(row, std::string(prefix) + " power must be positive");
  if (!power_to_grid_units(f.power, grid_units_per_kw)) {
    fail(row, std::string(prefix) + " power " + fmt(f.power) + " kW is not on the " +
                  fmt(1.0 / grid_units_per_kw) + " kW grid");
  }
  if (!(f.effect > 0)) fail(row, std::string(prefix) + " effect must be positive");
  if (!(f.loss >= 0 && f.loss <= 1)) fail(row, std::string(prefix) + " loss rate must lie in [0, 1]");
  return f;
}

void append_resident(Fleet& fleet, const std::string& id, bool cop,
                     const std::optional<ApplianceFields>& ac,
                     const std::optional<ApplianceFields>& ewh, int row,
                     std::set<std::string>& seen) {
  if (id.empty()) fail(row, "missing id");
  if (!seen.insert(id).second) fail(row, "duplicate id '" + id + "'");
  if (!ac && !ewh) fail(row, "resident must own at least one appliance");

  ResidentProfile profile;
  profile.id = id;
  profile.compromise = cop;
  InitialTemps temps;
  if (ac) {
    profile.ac = AcUnit{AcParams{ac->power, ac->effect, ac->loss}, ComfortRange{ac->low, ac->high}};
    temps.room_f = ac->init;
  }
  if (ewh) {
    profile.ewh =
        EwhUnit{EwhParams{ewh->power, ewh->effect, ewh->loss}, ComfortRange{ewh->low, ewh->high}};
    temps.tank_f = ewh->init;
  }
  profile.validate();
  fleet.profiles.push_back(std::move(profile));
  fleet.initial_temps.push_back(temps);
}

bool parse_cop(const std::string& cell, int row) {
  if (cell == "0" || cell == "false") return false;
  if (cell == "1" || cell == "true") return true;
  fail(row, "cop flag must be 0/1/true/false, got '" + cell + "'");
}

}  // namespace

double Fleet::total_curtailable_kw() const {
  double total = 0.0;
  for (const auto& profile : profiles) total += profile.curtailable_kw();
  return total;
}

void Fleet::validate() const {
  if (profiles.size() != initial_temps.size()) {
    throw std::invalid_argument("fleet: profiles and initial temperatures are misaligned");
  }
  for (size_t i = 0; i < profiles.size(); ++i) {
    profiles[i].validate();
    if (profiles[i].ac.has_value() != initial_temps[i].room_f.has_value() ||
        profiles[i].ewh.has_value() != initial_temps[i].tank_f.has_value()) {
      throw std::invalid_argument("fleet: resident " + profiles[i].id +
                                  " has initial temperatures inconsistent with its appliances");
    }
  }
}

Fleet load_fleet_csv(std::istream& in, int grid_units_per_kw) {
  Fleet fleet;
  std::string line;
  int row = 0;
  bool seen_version = false;
  bool seen_header = false;
  std::set<std::string> ids;

  while (std::getline(in, line)) {
    ++row;
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    if (!seen_version) {
      if (stripped != std::string("# ") + kFleetFormatVersion) {
        fail(row, std::string("expected version header '# ") + kFleetFormatVersion + "'");
      }
      seen_version = true;
      continue;
    }
    if (stripped[0] == '#') continue;
    if (!seen_header) {
      if (stripped != kCsvHeader) fail(row, "unexpected column header");
      seen_header = true;
      continue;
    }
    const auto cells = split_csv(stripped);
    if (cells.size() != 14) {
      fail(row, "expected 14 cells, got " + std::to_string(cells.size()));
    }
    const auto ac = read_block(cells, 2, "ac", row, grid_units_per_kw);
    const auto ewh = read_block(cells, 8, "ewh", row, grid_units_per_kw);
    append_resident(fleet, cells[0], parse_cop(cells[1], row), ac, ewh, row, ids);
  }
  if (!seen_version) throw FleetValidationError("fleet file is empty or missing version header");
  return fleet;
}

Fleet load_fleet_json(std::istream& in, int grid_units_per_kw) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw FleetValidationError(std::string("fleet json: ") + e.what());
  }
  if (!doc.is_object() || doc.value("version", "") != kFleetFormatVersion) {
    throw FleetValidationError(std::string("fleet json: expected version ") + kFleetFormatVersion);
  }
  if (!doc.contains("residents") || !doc["residents"].is_array()) {
    throw FleetValidationError("fleet json: missing residents array");
  }

  Fleet fleet;
  std::set<std::string> ids;
  int row = 0;
  for (const auto& entry : doc["residents"]) {
    ++row;
    if (!entry.is_object()) fail(row, "resident entry must be an object");
    std::optional<ApplianceFields> ac;
    std::optional<ApplianceFields> ewh;
    for (const char* key : {"ac", "ewh"}) {
      if (!entry.contains(key)) continue;
      const auto& block = entry[key];
      std::vector<std::string> cells(6);
      for (size_t k = 0; const char* field :
           {"low_f", "high_f", "power_kw", "init_f", "effect_f_per_kw", "loss_rate"}) {
        if (!block.contains(field)) {
          fail(row, std::string(key) + " block is missing " + field);
        }
        if (!block[field].is_number()) {
          fail(row, std::string(key) + "." + field + " must be a number");
        }
        cells[k++] = fmt(block[field].get<double>());
      }
      auto parsed = read_block(cells, 0, key, row, grid_units_per_kw);
      if (key[0] == 'a') ac = parsed;
      else ewh = parsed;
    }
    if (!entry.contains("id") || !entry["id"].is_string()) fail(row, "missing string id");
    if (!entry.contains("cop") || !entry["cop"].is_boolean()) fail(row, "missing boolean cop");
    append_resident(fleet, entry["id"].get<std::string>(), entry["cop"].get<bool>(), ac, ewh,
                    row, ids);
  }
  return fleet;
}

Fleet load_fleet(const std::filesystem::path& path, int grid_units_per_kw) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open fleet file " + path.string());
  if (path.extension() == ".json") return load_fleet_json(in, grid_units_per_kw);
  return load_fleet_csv(in, grid_units_per_kw);
}

void save_fleet_csv(const Fleet& fleet, std::ostream& out) {
  out << "# " << kFleetFormatVersion << "\n" << kCsvHeader << "\n";
  for (size_t i = 0; i < fleet.profiles.size(); ++i) {
    const auto& profile = fleet.profiles[i];
    const auto& temps = fleet.initial_temps[i];
    out << profile.id << ',' << (profile.compromise ? 1 : 0) << ',';
    if (profile.ac) {
      out << fmt(profile.ac->comfort.low_f) << ',' << fmt(profile.ac->comfort.high_f) << ','
          << fmt(profile.ac->params.power_kw) << ',' << fmt(temps.room_f.value()) << ','
          << fmt(profile.ac->params.effect_f_per_kw) << ',' << fmt(profile.ac->params.loss_rate);
    } else {
      out << ",,,,,";
    }
    out << ',';
    if (profile.ewh) {
      out << fmt(profile.ewh->comfort.low_f) << ',' << fmt(profile.ewh->comfort.high_f) << ','
          << fmt(profile.ewh->params.power_kw) << ',' << fmt(temps.tank_f.value()) << ','
          << fmt(profile.ewh->params.effect_f_per_kw) << ','
          << fmt(profile.ewh->params.loss_rate);
    } else {
      out << ",,,,,";
    }
    out << '\n';
  }
}

std::string fleet_to_csv(const Fleet& fleet) {
  std::ostringstream out;
  save_fleet_csv(fleet, out);
  return out.str();
}

std::string fleet_to_json(const Fleet& fleet) {
  json residents = json::array();
  for (size_t i = 0; i < fleet.profiles.size(); ++i) {
    const auto& profile = fleet.profiles[i];
    const auto& temps = fleet.initial_temps[i];
    json entry;
    entry["id"] = profile.id;
    entry["cop"] = profile.compromise;
    if (profile.ac) {
      entry["ac"] = {{"low_f", profile.ac->comfort.low_f},
                     {"high_f", profile.ac->comfort.high_f},
                     {"power_kw", profile.ac->params.power_kw},
                     {"init_f", temps.room_f.value()},
                     {"effect_f_per_kw", profile.ac->params.effect_f_per_kw},
                     {"loss_rate", profile.ac->params.loss_rate}};
    }
    if (profile.ewh) {
      entry["ewh"] = {{"low_f", profile.ewh->comfort.low_f},
                      {"high_f", profile.ewh->comfort.high_f},
                      {"power_kw", profile.ewh->params.power_kw},
                      {"init_f", temps.tank_f.value()},
                      {"effect_f_per_kw", profile.ewh->params.effect_f_per_kw},
                      {"loss_rate", profile.ewh->params.loss_rate}};
    }
    residents.push_back(entry);
  }
  json doc;
  doc["version"] = kFleetFormatVersion;
  doc["residents"] = residents;
  return doc.dump(2) + "\n";
}

void GeneratorSpec::validate() const {
  if (count < 1) throw std::invalid_argument("generator: count must be at least 1");
  const auto check_prob = [](double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument(std::string("generator: ") + what + " must lie in [0, 1]");
    }
  };
  check_prob(ac_probability, "ac_probability");
  check_prob(ewh_probability, "ewh_probability");
  check_prob(compromise_probability, "compromise_probability");
  const auto check_range = [](const FieldRange& r, const char* what) {
    if (!(std::isfinite(r.lo) && std::isfinite(r.hi) && r.lo <= r.hi)) {
      throw std::invalid_argument(std::string("generator: bad range for ") + what);
    }
  };
  check_range(ac_power_kw, "ac_power_kw");
  check_range(ac_low_f, "ac_low_f");
  check_range(ac_width_f, "ac_width_f");
  check_range(ac_effect_f_per_kw, "ac_effect_f_per_kw");
  check_range(ac_loss_rate, "ac_loss_rate");
  check_range(ewh_power_kw, "ewh_power_kw");
  check_range(ewh_low_f, "ewh_low_f");
  check_range(ewh_width_f, "ewh_width_f");
  check_range(ewh_effect_f_per_kw, "ewh_effect_f_per_kw");
  check_range(ewh_loss_rate, "ewh_loss_rate");
  if (!(ac_power_kw.lo > 0 && ewh_power_kw.lo > 0)) {
    throw std::invalid_argument("generator: power ranges must be positive");
  }
  if (!(ac_width_f.lo > 0 && ewh_width_f.lo > 0)) {
    throw std::invalid_argument("generator: comfort width ranges must be positive");
  }
  if (!(ac_loss_rate.lo >= 0 && ac_loss_rate.hi <= 1 && ewh_loss_rate.lo >= 0 &&
        ewh_loss_rate.hi <= 1)) {
    throw std::invalid_argument("generator: loss rate ranges must stay inside [0, 1]");
  }
}

namespace {

double quantize(double v, double step) { return std::round(v / step) * step; }

json range_to_json(const FieldRange& r) { return json::array({r.lo, r.hi}); }

FieldRange range_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw std::invalid_argument(std::string("generator json: ") + what +
                                " must be a [lo, hi] pair");
  }
  return FieldRange{j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

GeneratorSpec generator_spec_from_json(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("generator json: ") + e.what());
  }
  GeneratorSpec spec;
  spec.count = doc.value("count", spec.count);
  spec.seed = doc.value("seed", spec.seed);
  spec.ac_probability = doc.value("ac_probability", spec.ac_probability);
  spec.ewh_probability = doc.value("ewh_probability", spec.ewh_probability);
  spec.compromise_probability = doc.value("compromise_probability", spec.compromise_probability);
  const auto maybe_range = [&doc](const char* key, FieldRange& target) {
    if (doc.contains(key)) target = range_from_json(doc[key], key);
  };
  maybe_range("ac_power_kw", spec.ac_power_kw);
  maybe_range("ac_low_f", spec.ac_low_f);
  maybe_range("ac_width_f", spec.ac_width_f);
  maybe_range("ac_effect_f_per_kw", spec.ac_effect_f_per_kw);
  maybe_range("ac_loss_rate", spec.ac_loss_rate);
  maybe_range("ewh_power_kw", spec.ewh_power_kw);
  maybe_range("ewh_low_f", spec.ewh_low_f);
  maybe_range("ewh_width_f", spec.ewh_width_f);
  maybe_range("ewh_effect_f_per_kw", spec.ewh_effect_f_per_kw);
  maybe_range("ewh_loss_rate", spec.ewh_loss_rate);
  spec.validate();
  return spec;
}

std::string generator_spec_to_json(const GeneratorSpec& spec) {
  json doc;
  doc["count"] = spec.count;
  doc["seed"] = spec.seed;
  doc["ac_probability"] = spec.ac_probability;
  doc["ewh_probability"] = spec.ewh_probability;
  doc["compromise_probability"] = spec.compromise_probability;
  doc["ac_power_kw"] = range_to_json(spec.ac_power_kw);
  doc["ac_low_f"] = range_to_json(spec.ac_low_f);
  doc["ac_width_f"] = range_to_json(spec.ac_width_f);
  doc["ac_effect_f_per_kw"] = range_to_json(spec.ac_effect_f_per_kw);
  doc["ac_loss_rate"] = range_to_json(spec.ac_loss_rate);
  doc["ewh_power_kw"] = range_to_json(spec.ewh_power_kw);
  doc["ewh_low_f"] = range_to_json(spec.ewh_low_f);
  doc["ewh_width_f"] = range_to_json(spec.ewh_width_f);
  doc["ewh_effect_f_per_kw"] = range_to_json(spec.ewh_effect_f_per_kw);
  doc["ewh_loss_rate"] = range_to_json(spec.ewh_loss_rate);
  return doc.dump(2) + "\n";
}

Fleet generate_fleet(const GeneratorSpec& spec, int grid_units_per_kw) {
  spec.validate();
  SplitMix64 rng(spec.seed);
  Fleet fleet;

  int width = 1;
  for (int v = spec.count; v >= 10; v /= 10) ++width;
  width = std::min(width, 9);

  for (int i = 0; i < spec.count; ++i) {
    // Fixed draw count per resident keeps the stream aligned regardless of
    // which appliances end up present.
    const bool draw_ac = rng.bernoulli(spec.ac_probability);
    const bool draw_ewh = rng.bernoulli(spec.ewh_probability);
    const bool cop = rng.bernoulli(spec.compromise_probability);

    double ac_vals[6];
    ac_vals[0] = rng.uniform(spec.ac_power_kw.lo, spec.ac_power_kw.hi);
    ac_vals[1] = rng.uniform(spec.ac_low_f.lo, spec.ac_low_f.hi);
    ac_vals[2] = rng.uniform(spec.ac_width_f.lo, spec.ac_width_f.hi);
    ac_vals[3] = rng.next_unit();  // position of the initial temp inside the range
    ac_vals[4] = rng.uniform(spec.ac_effect_f_per_kw.lo, spec.ac_effect_f_per_kw.hi);
    ac_vals[5] = rng.uniform(spec.ac_loss_rate.lo, spec.ac_loss_rate.hi);

    double ewh_vals[6];
    ewh_vals[0] = rng.uniform(spec.ewh_power_kw.lo, spec.ewh_power_kw.hi);
    ewh_vals[1] = rng.uniform(spec.ewh_low_f.lo, spec.ewh_low_f.hi);
    ewh_vals[2] = rng.uniform(spec.ewh_width_f.lo, spec.ewh_width_f.hi);
    ewh_vals[3] = rng.next_unit();
    ewh_vals[4] = rng.uniform(spec.ewh_effect_f_per_kw.lo, spec.ewh_effect_f_per_kw.hi);
    ewh_vals[5] = rng.uniform(spec.ewh_loss_rate.lo, spec.ewh_loss_rate.hi);

    const bool has_ac = draw_ac || !draw_ewh;  // at least one appliance
    const bool has_ewh = draw_ewh;

    char idbuf[32];
    std::snprintf(idbuf, sizeof(idbuf), "h%0*d", width, i + 1);

    ResidentProfile profile;
    profile.id = idbuf;
    profile.compromise = cop;
    InitialTemps temps;
    if (has_ac) {
      const double power =
          std::max(1.0 / grid_units_per_kw,
                   quantize(ac_vals[0], 1.0 / grid_units_per_kw));
      const double low = quantize(ac_vals[1], 0.1);
      const double high = quantize(low + ac_vals[2], 0.1);
      profile.ac = AcUnit{AcParams{power, quantize(ac_vals[4], 0.01), quantize(ac_vals[5], 0.001)},
                          ComfortRange{low, high}};
      temps.room_f = quantize(low + ac_vals[3] * (high - low), 0.1);
    }
    if (has_ewh) {
      const double power =
          std::max(1.0 / grid_units_per_kw,
                   quantize(ewh_vals[0], 1.0 / grid_units_per_kw));
      const double low = quantize(ewh_vals[1], 0.1);
      const double high = quantize(low + ewh_vals[2], 0.1);
      profile.ewh =
          EwhUnit{EwhParams{power, quantize(ewh_vals[4], 0.01), quantize(ewh_vals[5], 0.001)},
                  ComfortRange{low, high}};
      temps.tank_f = quantize(low + ewh_vals[3] * (high - low), 0.1);
    }
    profile.validate();
    fleet.profiles.push_back(std::move(profile));
    fleet.initial_temps.push_back(temps);
  }
  return fleet;
}

}  // namespace rla

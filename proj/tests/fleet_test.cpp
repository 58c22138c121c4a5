#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "rla/fleet.hpp"
#include "rla/rng.hpp"

using namespace rla;

namespace {

const std::string kFixtureDir = std::string(RLA_SOURCE_DIR) + "/data/";

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("ten-resident fixture loads with the expected totals") {
  Fleet fleet = load_fleet(kFixtureDir + "table3.csv");
  REQUIRE(fleet.size() == 10);
  CHECK(fleet.total_curtailable_kw() == doctest::Approx(13.6));
  for (const auto& profile : fleet.profiles) {
    CHECK(profile.ac.has_value());
    CHECK_FALSE(profile.ewh.has_value());
  }
  // spot-check row 5
  const auto& r5 = fleet.profiles[4];
  CHECK(r5.id == "5");
  CHECK(r5.compromise);
  CHECK(r5.ac->params.power_kw == doctest::Approx(1.6));
  CHECK(r5.ac->params.effect_f_per_kw == doctest::Approx(6.0));
  CHECK(r5.ac->params.loss_rate == doctest::Approx(0.3));
  CHECK(r5.ac->comfort.low_f == doctest::Approx(65.0));
  CHECK(fleet.initial_temps[4].room_f == doctest::Approx(70.0));
  CHECK_FALSE(fleet.initial_temps[4].tank_f.has_value());

  // compromise flags per row: 0,1,0,0,1,1,0,1,0,1
  const std::vector<bool> cops = {false, true, false, false, true, true, false, true, false, true};
  for (size_t i = 0; i < cops.size(); ++i) CHECK(fleet.profiles[i].compromise == cops[i]);
}

TEST_CASE("mixed fixture carries EWH blocks") {
  Fleet fleet = load_fleet(kFixtureDir + "table3_ewh.csv");
  REQUIRE(fleet.size() == 10);
  CHECK(fleet.profiles[0].ewh.has_value());
  CHECK_FALSE(fleet.profiles[2].ewh.has_value());
  CHECK(fleet.initial_temps[0].tank_f == doctest::Approx(120.0));
}

TEST_CASE("fixture round-trips through serialization unchanged") {
  Fleet fleet = load_fleet(kFixtureDir + "table3.csv");
  const std::string csv = fleet_to_csv(fleet);
  std::istringstream in(csv);
  Fleet reloaded = load_fleet_csv(in);
  CHECK(fleet_to_csv(reloaded) == csv);
  REQUIRE(reloaded.size() == fleet.size());
  for (size_t i = 0; i < fleet.size(); ++i) {
    CHECK(reloaded.profiles[i].id == fleet.profiles[i].id);
    CHECK(reloaded.profiles[i].ac->params.power_kw == fleet.profiles[i].ac->params.power_kw);
    CHECK(reloaded.initial_temps[i].room_f == fleet.initial_temps[i].room_f);
  }

  // and through the json form
  const std::string json_text = fleet_to_json(fleet);
  std::istringstream json_in(json_text);
  Fleet from_json = load_fleet_json(json_in);
  CHECK(fleet_to_csv(from_json) == csv);
}

TEST_CASE("validation errors name the offending row") {
  const std::string header =
      "# rla-fleet-v1\n"
      "id,cop,ac_low_f,ac_high_f,ac_power_kw,ac_init_f,ac_effect_f_per_kw,ac_loss_rate,"
      "ewh_low_f,ewh_high_f,ewh_power_kw,ewh_init_f,ewh_effect_f_per_kw,ewh_loss_rate\n";

  const auto expect_error = [&](const std::string& row, const std::string& needle) {
    std::istringstream in(header + row);
    try {
      load_fleet_csv(in);
      FAIL_CHECK("expected a validation error for: " << row);
    } catch (const FleetValidationError& e) {
      const std::string what = e.what();
      CHECK(what.find("row 3") != std::string::npos);
      CHECK(what.find(needle) != std::string::npos);
    }
  };

  expect_error("1,0,75,70,1.3,72.5,5,0.1,,,,,,\n", "inverted");
  expect_error("1,0,70,75,1.25,72.5,5,0.1,,,,,,\n", "grid");
  expect_error("1,0,70,75,1.3,72.5,,0.1,,,,,,\n", "incomplete");
  expect_error("1,0,,,,,,,,,,,,\n", "at least one appliance");
  expect_error("1,2,70,75,1.3,72.5,5,0.1,,,,,,\n", "cop");
  expect_error("1,0,70,75,1.3,72.5,5,1.4,,,,,,\n", "loss");
  expect_error(",0,70,75,1.3,72.5,5,0.1,,,,,,\n", "missing id");

  // duplicate ids name the second row
  std::istringstream dup_in(header +
                            "1,0,70,75,1.3,72.5,5,0.1,,,,,,\n1,0,70,75,1.3,72.5,5,0.1,,,,,,\n");
  CHECK_THROWS_WITH_AS(load_fleet_csv(dup_in), doctest::Contains("row 4"), FleetValidationError);
}

TEST_CASE("a finer grid accepts powers the default rejects") {
  const std::string text =
      "# rla-fleet-v1\n"
      "id,cop,ac_low_f,ac_high_f,ac_power_kw,ac_init_f,ac_effect_f_per_kw,ac_loss_rate,"
      "ewh_low_f,ewh_high_f,ewh_power_kw,ewh_init_f,ewh_effect_f_per_kw,ewh_loss_rate\n"
      "1,0,70,75,1.25,72.5,5,0.1,,,,,,\n";
  std::istringstream in(text);
  Fleet fleet = load_fleet_csv(in, 20);
  CHECK(fleet.profiles[0].ac->params.power_kw == doctest::Approx(1.25));
}

TEST_CASE("generator is deterministic and self-consistent") {
  GeneratorSpec spec;
  spec.count = 50;
  spec.seed = 12345;
  spec.ewh_probability = 0.4;
  spec.ac_probability = 0.8;

  Fleet a = generate_fleet(spec);
  Fleet b = generate_fleet(spec);
  CHECK(fleet_to_csv(a) == fleet_to_csv(b));  // byte-identical files

  spec.seed = 54321;
  Fleet c = generate_fleet(spec);
  CHECK(fleet_to_csv(a) != fleet_to_csv(c));
}

TEST_CASE("generated fleets always pass ingestion") {
  SplitMix64 rng(51);
  for (int round = 0; round < 30; ++round) {
    GeneratorSpec spec;
    spec.count = 1 + static_cast<int>(rng.next() % 60);
    spec.seed = rng.next();
    spec.ac_probability = rng.uniform(0.0, 1.0);
    spec.ewh_probability = rng.uniform(0.0, 1.0);
    spec.compromise_probability = rng.uniform(0.0, 1.0);
    Fleet fleet = generate_fleet(spec);
    CHECK(fleet.size() == static_cast<size_t>(spec.count));

    std::istringstream in(fleet_to_csv(fleet));
    CHECK_NOTHROW(load_fleet_csv(in));
  }
}

TEST_CASE("generated ids are unique and count matches") {
  GeneratorSpec spec;
  spec.count = 500;
  spec.seed = 7;
  Fleet fleet = generate_fleet(spec);
  CHECK(fleet.size() == 500);
  std::set<std::string> ids;
  for (const auto& profile : fleet.profiles) ids.insert(profile.id);
  CHECK(ids.size() == 500);
}

TEST_CASE("all-AC spec emits no EWH blocks") {
  GeneratorSpec spec;
  spec.count = 20;
  spec.seed = 9;
  spec.ac_probability = 1.0;
  spec.ewh_probability = 0.0;
  Fleet fleet = generate_fleet(spec);
  for (const auto& profile : fleet.profiles) {
    CHECK(profile.ac.has_value());
    CHECK_FALSE(profile.ewh.has_value());
  }
}

TEST_CASE("generator spec round-trips through json") {
  GeneratorSpec spec;
  spec.count = 77;
  spec.seed = 42;
  spec.ewh_probability = 0.25;
  spec.ac_low_f = {66.0, 71.0};
  const std::string text = generator_spec_to_json(spec);
  std::istringstream in(text);
  GeneratorSpec parsed = generator_spec_from_json(in);
  CHECK(parsed.count == 77);
  CHECK(parsed.seed == 42);
  CHECK(parsed.ewh_probability == doctest::Approx(0.25));
  CHECK(parsed.ac_low_f.lo == doctest::Approx(66.0));
  // identical fleets from identical specs
  CHECK(fleet_to_csv(generate_fleet(spec)) == fleet_to_csv(generate_fleet(parsed)));
}

TEST_CASE("generator spec validation") {
  GeneratorSpec bad;
  bad.count = 0;
  CHECK_THROWS_AS(generate_fleet(bad), std::invalid_argument);
  GeneratorSpec negative_power;
  negative_power.ac_power_kw = {-1.0, 2.0};
  CHECK_THROWS_AS(generate_fleet(negative_power), std::invalid_argument);
}

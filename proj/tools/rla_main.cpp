// Command-line front end: scenario runs, request sweeps, MILP export,
// capability reports, and synthetic fleet generation.
//
// Exit codes: 0 success, 2 usage or validation failure, 3 infeasible
// request, 4 I/O failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rla/dispatch.hpp"
#include "rla/fleet.hpp"
#include "rla/milp.hpp"
#include "rla/report.hpp"
#include "rla/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitIo = 4;

struct ScenarioFlags {
  std::string fleet_path;
  double delta = 0.05;
  std::string mode = "cooling";
  double ambient_f = 0.0;
  std::string ambient_csv;
  double r1 = 10.0, r2 = 20.0, r3 = 30.0;
  rla::Microcents comfort_weight = 100;
  double big_m = 1000.0;
  double epsilon_f = 0.001;
  int grid_units_per_kw = rla::kDefaultGridUnitsPerKw;
  std::uint64_t seed = 0;
  double disturbance_f = 0.0;
};

// Flags shared by every subcommand that executes scenarios. Environment
// variables override the built-in defaults; explicit flags override both.
void add_scenario_flags(CLI::App* cmd, ScenarioFlags* flags) {
  cmd->add_option("--fleet", flags->fleet_path, "fleet file (.csv or .json)")->required();
  cmd->add_option("--delta", flags->delta, "relative tolerance on the achieved reduction")
      ->envname("RLA_DELTA")
      ->capture_default_str();
  cmd->add_option("--mode", flags->mode, "season mode: cooling or heating")
      ->capture_default_str();
  auto* ambient =
      cmd->add_option("--ambient", flags->ambient_f, "constant ambient temperature, degrees F");
  auto* trajectory = cmd->add_option("--ambient-csv", flags->ambient_csv,
                                     "per-step ambient temperatures, one value per line");
  ambient->excludes(trajectory);
  trajectory->excludes(ambient);
  cmd->add_option("--r1", flags->r1, "common reward rate, cents/(kW*step)")
      ->capture_default_str();
  cmd->add_option("--r2", flags->r2, "compromised reward rate, cents/(kW*step)")
      ->capture_default_str();
  cmd->add_option("--r3", flags->r3, "emergency reward rate, cents/(kW*step)")
      ->capture_default_str();
  cmd->add_option("--comfort-weight", flags->comfort_weight,
                  "comfort penalty, micro-cents per squared margin")
      ->envname("RLA_COMFORT_WEIGHT")
      ->capture_default_str();
  cmd->add_option("--big-m", flags->big_m, "indicator constant for the MILP export")
      ->envname("RLA_BIG_M")
      ->capture_default_str();
  cmd->add_option("--epsilon", flags->epsilon_f,
                  "strict-inequality slack for the MILP export, degrees F")
      ->envname("RLA_EPSILON")
      ->capture_default_str();
  cmd->add_option("--grid", flags->grid_units_per_kw, "power grid resolution, units per kW")
      ->capture_default_str();
  cmd->add_option("--seed", flags->seed, "seed for the disturbance stream")
      ->capture_default_str();
  cmd->add_option("--disturbance", flags->disturbance_f,
                  "sensor disturbance amplitude, degrees F")
      ->capture_default_str();
}

rla::SeasonMode parse_mode(const std::string& text) {
  const auto mode = rla::season_mode_from_string(text);
  if (!mode) throw std::invalid_argument("unknown mode '" + text + "'");
  return *mode;
}

std::vector<double> ambient_trajectory(const ScenarioFlags& flags, const CLI::App* cmd) {
  if (!flags.ambient_csv.empty()) {
    std::ifstream in(flags.ambient_csv);
    if (!in) throw std::runtime_error("cannot open " + flags.ambient_csv);
    std::vector<double> trajectory;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      trajectory.push_back(std::stod(line));
    }
    if (trajectory.empty()) {
      throw std::invalid_argument("ambient file " + flags.ambient_csv + " holds no values");
    }
    return trajectory;
  }
  if (cmd->count("--ambient") == 0) {
    throw std::invalid_argument("one of --ambient or --ambient-csv is required");
  }
  return {flags.ambient_f};
}

rla::ScenarioConfig build_scenario(const ScenarioFlags& flags, const CLI::App* cmd) {
  rla::ScenarioConfig scenario;
  scenario.ambient_trajectory_f = ambient_trajectory(flags, cmd);
  scenario.schedule = rla::RewardSchedule{flags.r1, flags.r2, flags.r3};
  scenario.schedule.validate();
  scenario.objective.comfort_weight = flags.comfort_weight;
  scenario.objective.big_m = flags.big_m;
  scenario.objective.strict_epsilon_f = flags.epsilon_f;
  scenario.objective.grid_units_per_kw = flags.grid_units_per_kw;
  scenario.objective.validate();
  scenario.seed = flags.seed;
  scenario.disturbance.amplitude_f = flags.disturbance_f;
  return scenario;
}

void write_file(const std::string& path, const std::string& payload) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << payload;
  if (!out) throw std::runtime_error("failed writing " + path);
}

int cmd_run(const ScenarioFlags& flags, const CLI::App* cmd, double amount, int duration,
            const std::string& out_path, const std::string& format) {
  rla::Fleet fleet = rla::load_fleet(flags.fleet_path, flags.grid_units_per_kw);
  rla::DrrRequest request{amount, flags.delta, duration, parse_mode(flags.mode)};
  request.validate();
  rla::ScenarioConfig scenario = build_scenario(flags, cmd);

  rla::SessionReport report = rla::run_session(fleet, request, scenario);
  rla::ReportMeta meta{request, scenario};

  std::cout << rla::session_to_table(report);
  if (!out_path.empty()) {
    write_file(out_path, format == "json" ? rla::session_to_json(report, meta)
                                          : rla::session_to_csv(report, meta));
  }
  return report.aborted ? kExitInfeasible : kExitOk;
}

int cmd_sweep(const ScenarioFlags& flags, const CLI::App* cmd, std::vector<double> amounts,
              std::vector<int> durations, const std::string& out_path,
              const std::string& format) {
  rla::Fleet fleet = rla::load_fleet(flags.fleet_path, flags.grid_units_per_kw);
  rla::ScenarioConfig scenario = build_scenario(flags, cmd);
  const auto mode = parse_mode(flags.mode);

  auto cells = rla::run_sweep(fleet, amounts, durations, flags.delta, mode, scenario);
  rla::DrrRequest meta_request{amounts.front(), flags.delta, durations.front(), mode};
  rla::ReportMeta meta{meta_request, scenario};
  write_file(out_path, format == "json" ? rla::sweep_to_json(cells, meta)
                                        : rla::sweep_to_csv(cells, meta));

  int feasible = 0;
  for (const auto& cell : cells) feasible += cell.feasible ? 1 : 0;
  std::cout << "sweep: " << cells.size() << " cells, " << feasible << " feasible, written to "
            << out_path << "\n";
  return feasible > 0 ? kExitOk : kExitInfeasible;
}

int cmd_export_milp(const ScenarioFlags& flags, const CLI::App* cmd, double amount,
                    const std::string& out_path) {
  rla::Fleet fleet = rla::load_fleet(flags.fleet_path, flags.grid_units_per_kw);
  rla::DrrRequest request{amount, flags.delta, rla::kStepMinutes, parse_mode(flags.mode)};
  request.validate();
  rla::ScenarioConfig scenario = build_scenario(flags, cmd);

  std::vector<rla::ThermalState> states;
  states.reserve(fleet.size());
  for (const auto& temps : fleet.initial_temps) {
    states.push_back(rla::ThermalState{temps.room_f, temps.tank_f, scenario.ambient_at(0)});
  }
  write_file(out_path, rla::export_milp(fleet.profiles, states, request, scenario.schedule,
                                        scenario.objective));
  std::cout << "model written to " << out_path << "\n";
  return kExitOk;
}

int cmd_capability(const ScenarioFlags& flags) {
  rla::Fleet fleet = rla::load_fleet(flags.fleet_path, flags.grid_units_per_kw);
  const auto sums = rla::reachable_reduction_units(fleet.profiles, flags.grid_units_per_kw);
  char buf[96];
  std::snprintf(buf, sizeof(buf), "max reachable reduction: %.10g kW\n",
                rla::grid_units_to_kw(sums.back(), flags.grid_units_per_kw));
  std::cout << "fleet: " << fleet.size() << " residents, " << fleet.total_curtailable_kw()
            << " kW curtailable\n"
            << buf << "distinct reachable sums: " << sums.size() << "\n";
  return kExitOk;
}

int cmd_generate(int count, std::uint64_t seed, const std::string& spec_path,
                 const std::string& out_path, int grid, const CLI::App* cmd) {
  rla::GeneratorSpec spec;
  if (!spec_path.empty()) {
    std::ifstream in(spec_path);
    if (!in) throw std::runtime_error("cannot open " + spec_path);
    spec = rla::generator_spec_from_json(in);
  }
  if (cmd->count("--count") > 0) spec.count = count;
  if (cmd->count("--seed") > 0) spec.seed = seed;
  if (spec_path.empty() && cmd->count("--seed") == 0) {
    throw std::invalid_argument("--seed is required (or provide it via --spec)");
  }
  spec.validate();
  rla::Fleet fleet = rla::generate_fleet(spec, grid);
  const bool json = out_path.ends_with(".json");
  write_file(out_path, json ? rla::fleet_to_json(fleet) : rla::fleet_to_csv(fleet));
  std::cout << "fleet of " << fleet.size() << " residents written to " << out_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"residential load aggregator: exact appliance curtailment dispatch"};
  app.require_subcommand(1);

  ScenarioFlags run_flags;
  double run_amount = 0.0;
  int run_duration = 5;
  std::string run_out, run_format = "csv";
  auto* run = app.add_subcommand("run", "execute one demand-reduction session");
  add_scenario_flags(run, &run_flags);
  run->add_option("--amount", run_amount, "demand reduction, kW")->required();
  run->add_option("--duration", run_duration, "request duration, minutes (multiple of 5)")
      ->required();
  run->add_option("--out", run_out, "report file to write");
  run->add_option("--format", run_format, "report format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  ScenarioFlags sweep_flags;
  std::vector<double> sweep_amounts;
  std::vector<int> sweep_durations;
  std::string sweep_out, sweep_format = "csv";
  auto* sweep = app.add_subcommand("sweep", "grid of sessions over amounts x durations");
  add_scenario_flags(sweep, &sweep_flags);
  sweep->add_option("--amounts", sweep_amounts, "amounts, kW")->required()->delimiter(',');
  sweep->add_option("--durations", sweep_durations, "durations, minutes")
      ->required()
      ->delimiter(',');
  sweep->add_option("--out", sweep_out, "grid file to write")->required();
  sweep->add_option("--format", sweep_format, "grid format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  ScenarioFlags milp_flags;
  double milp_amount = 0.0;
  std::string milp_out;
  auto* milp =
      app.add_subcommand("export-milp", "write one dispatch step as an LP-format MILP model");
  add_scenario_flags(milp, &milp_flags);
  milp->add_option("--amount", milp_amount, "demand reduction, kW")->required();
  milp->add_option("--out", milp_out, "model file to write")->required();

  ScenarioFlags capability_flags;
  auto* capability =
      app.add_subcommand("capability", "report the fleet's reachable reduction sums");
  capability->add_option("--fleet", capability_flags.fleet_path, "fleet file")->required();
  capability->add_option("--grid", capability_flags.grid_units_per_kw,
                         "power grid resolution, units per kW")
      ->capture_default_str();

  int generate_count = 0;
  std::uint64_t generate_seed = 0;
  std::string generate_spec, generate_out;
  int generate_grid = rla::kDefaultGridUnitsPerKw;
  auto* generate = app.add_subcommand("generate", "draw a synthetic fleet");
  generate->add_option("--count", generate_count, "number of residents");
  generate->add_option("--seed", generate_seed, "generator seed");
  generate->add_option("--spec", generate_spec, "generator spec json");
  generate->add_option("--out", generate_out, "fleet file to write (.csv or .json)")->required();
  generate->add_option("--grid", generate_grid, "power grid resolution, units per kW")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (run->parsed()) {
      return cmd_run(run_flags, run, run_amount, run_duration, run_out, run_format);
    }
    if (sweep->parsed()) {
      return cmd_sweep(sweep_flags, sweep, sweep_amounts, sweep_durations, sweep_out,
                       sweep_format);
    }
    if (milp->parsed()) return cmd_export_milp(milp_flags, milp, milp_amount, milp_out);
    if (capability->parsed()) return cmd_capability(capability_flags);
    if (generate->parsed()) {
      return cmd_generate(generate_count, generate_seed, generate_spec, generate_out,
                          generate_grid, generate);
    }
  } catch (const rla::FleetValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitValidation;
}

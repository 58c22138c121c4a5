#include "rla/milp.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace rla {

namespace {

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Signed term "+ 1.5 x" / "- 2 x" with LP spacing.
void append_term(std::string& line, double coef, const std::string& var, bool first) {
  if (coef == 0.0) return;
  const bool negative = coef < 0.0;
  const double magnitude = negative ? -coef : coef;
  if (first) {
    line += negative ? "-" : "";
  } else {
    line += negative ? " - " : " + ";
  }
  line += num(magnitude);
  line += ' ';
  line += var;
}

std::vector<std::string> build_lp_names(const std::vector<ResidentProfile>& profiles) {
  std::vector<std::string> names;
  std::set<std::string> used;
  for (const auto& profile : profiles) {
    std::string base = lp_identifier(profile.id);
    std::string name = base;
    int suffix = 2;
    while (!used.insert(name).second) {
      name = base + "_" + std::to_string(suffix++);
    }
    names.push_back(name);
  }
  return names;
}

struct ApplianceAffine {
  double base_f = 0.0;   // predicted temperature with the appliance off
  double slope_f = 0.0;  // change when the appliance runs
};

ApplianceAffine ac_affine(const ResidentProfile& profile, const ThermalState& state,
                          SeasonMode mode) {
  ApplianceAffine affine;
  affine.base_f = estimate_ac_temp(state, profile.ac->params, false, mode);
  affine.slope_f = estimate_ac_temp(state, profile.ac->params, true, mode) - affine.base_f;
  return affine;
}

ApplianceAffine ewh_affine(const ResidentProfile& profile, const ThermalState& state) {
  ApplianceAffine affine;
  affine.base_f = estimate_ewh_temp(state, profile.ewh->params, false);
  affine.slope_f = estimate_ewh_temp(state, profile.ewh->params, true) - affine.base_f;
  return affine;
}

const ResidentOption* find_option(const std::vector<ResidentOption>& options, bool ac_on,
                                  bool ewh_on) {
  for (const auto& opt : options) {
    if (opt.ac_on == ac_on && opt.ewh_on == ewh_on) return &opt;
  }
  return nullptr;
}

}  // namespace

std::string lp_identifier(const std::string& id) {
  std::string out;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '_';
    out += ok ? c : '_';
  }
  if (out.empty()) out = "x";
  return out;
}

std::string export_milp(const std::vector<ResidentProfile>& profiles,
                        const std::vector<ThermalState>& states, const DrrRequest& request,
                        const RewardSchedule& schedule, const ObjectiveConfig& config) {
  if (profiles.size() != states.size()) {
    throw std::invalid_argument("export_milp: profiles and states must be aligned");
  }
  request.validate();
  schedule.validate();
  config.validate();

  const std::vector<std::string> names = build_lp_names(profiles);
  const double window_lo = (1.0 - request.delta) * request.amount_kw;
  const double window_hi = (1.0 + request.delta) * request.amount_kw;

  std::ostringstream header;
  std::ostringstream constraints;
  std::ostringstream bounds;
  std::ostringstream binaries;

  header << "\\ demand-reduction step model (lp format)\n";
  header << "\\ request: amount_kw=" << num(request.amount_kw) << " delta=" << num(request.delta)
         << " mode=" << to_string(request.mode) << "\n";
  header << "\\ schedule_cents: r1=" << num(schedule.r1_cents) << " r2=" << num(schedule.r2_cents)
         << " r3=" << num(schedule.r3_cents) << "\n";
  header << "\\ objective config: comfort_weight_microcents=" << config.comfort_weight
         << " big_m=" << num(config.big_m) << " epsilon_f=" << num(config.strict_epsilon_f)
         << " grid_units_per_kw=" << config.grid_units_per_kw << "\n";
  header << "\\ variables: SA_*/SE_* appliance statuses (1=on); mu_* = 1 iff the predicted room\n";
  header << "\\ temperature stays at or below its high threshold; nu_* = 1 iff the predicted\n";
  header << "\\ tank temperature stays at or above its low threshold; both_on_* = SA*SE.\n";
  header << "\\ objective: per-option cost constants in cents (tiered reward for curtailed\n";
  header << "\\ power plus weighted squared comfort margin), folded onto the status binaries;\n";
  header << "\\ a trailing constant term carries the all-off baseline.\n";

  std::string obj_line = "";
  double obj_constant = 0.0;
  bool first_term = true;

  std::string tdr_line = "1 TDR";
  double total_power = 0.0;

  for (size_t i = 0; i < profiles.size(); ++i) {
    const auto& profile = profiles[i];
    const auto& name = names[i];
    const auto options = enumerate_options(profile, states[i], schedule, config, request.mode);

    header << "\\ resident " << profile.id << " (" << name
           << "): compromise=" << (profile.compromise ? 1 : 0);
    for (const auto& opt : options) {
      header << " cost[";
      if (profile.ac) header << "SA=" << (opt.ac_on ? 1 : 0);
      if (profile.ac && profile.ewh) header << ",";
      if (profile.ewh) header << "SE=" << (opt.ewh_on ? 1 : 0);
      header << "]=" << num(microcents_to_cents(opt.cost));
    }
    header << "\n";

    const std::string sa = "SA_" + name;
    const std::string se = "SE_" + name;

    if (profile.ac && profile.ewh) {
      const double c00 = microcents_to_cents(find_option(options, false, false)->cost);
      const double c10 = microcents_to_cents(find_option(options, true, false)->cost);
      const double c01 = microcents_to_cents(find_option(options, false, true)->cost);
      const double c11 = microcents_to_cents(find_option(options, true, true)->cost);
      append_term(obj_line, c10 - c00, sa, first_term);
      first_term = obj_line.empty();
      append_term(obj_line, c01 - c00, se, first_term);
      first_term = obj_line.empty();
      append_term(obj_line, c11 - c10 - c01 + c00, "both_on_" + name, first_term);
      first_term = obj_line.empty();
      obj_constant += c00;

      constraints << " link_a_" << name << ": 1 both_on_" << name << " - 1 " << sa << " <= 0\n";
      constraints << " link_e_" << name << ": 1 both_on_" << name << " - 1 " << se << " <= 0\n";
      constraints << " link_ae_" << name << ": 1 both_on_" << name << " - 1 " << sa << " - 1 "
                  << se << " >= -1\n";
      bounds << " 0 <= both_on_" << name << " <= 1\n";
    } else if (profile.ac) {
      const double c_off = microcents_to_cents(find_option(options, false, true)->cost);
      const double c_on = microcents_to_cents(find_option(options, true, true)->cost);
      append_term(obj_line, c_on - c_off, sa, first_term);
      first_term = obj_line.empty();
      obj_constant += c_off;
    } else {
      const double c_off = microcents_to_cents(find_option(options, true, false)->cost);
      const double c_on = microcents_to_cents(find_option(options, true, true)->cost);
      append_term(obj_line, c_on - c_off, se, first_term);
      first_term = obj_line.empty();
      obj_constant += c_off;
    }

    if (profile.ac) {
      const auto affine = ac_affine(profile, states[i], request.mode);
      const double high = profile.ac->comfort.high_f;
      // T - T_H <= M (1 - mu)   and   T - T_H >= -M mu + eps
      constraints << " mu_up_" << name << ": " << num(affine.slope_f) << " " << sa << " + "
                  << num(config.big_m) << " mu_" << name
                  << " <= " << num(config.big_m + high - affine.base_f) << "\n";
      constraints << " mu_lo_" << name << ": " << num(affine.slope_f) << " " << sa << " + "
                  << num(config.big_m) << " mu_" << name
                  << " >= " << num(high - affine.base_f + config.strict_epsilon_f) << "\n";
      binaries << " " << sa << "\n mu_" << name << "\n";
      tdr_line += " + " + num(profile.ac->params.power_kw) + " " + sa;
      total_power += profile.ac->params.power_kw;
    }
    if (profile.ewh) {
      const auto affine = ewh_affine(profile, states[i]);
      const double low = profile.ewh->comfort.low_f;
      // T_TL - T <= M (1 - nu)   and   T_TL - T >= -M nu + eps
      constraints << " nu_up_" << name << ": " << num(-affine.slope_f) << " " << se << " + "
                  << num(config.big_m) << " nu_" << name
                  << " <= " << num(config.big_m - low + affine.base_f) << "\n";
      constraints << " nu_lo_" << name << ": " << num(-affine.slope_f) << " " << se << " + "
                  << num(config.big_m) << " nu_" << name
                  << " >= " << num(affine.base_f - low + config.strict_epsilon_f) << "\n";
      binaries << " " << se << "\n nu_" << name << "\n";
      tdr_line += " + " + num(profile.ewh->params.power_kw) + " " + se;
      total_power += profile.ewh->params.power_kw;
    }
  }

  if (obj_line.empty()) obj_line = "0 TDR";
  if (obj_constant != 0.0) {
    obj_line += obj_constant > 0 ? " + " : " - ";
    obj_line += num(std::abs(obj_constant));
  }

  std::ostringstream out;
  out << header.str();
  out << "Minimize\n obj: " << obj_line << "\n";
  out << "Subject To\n";
  out << " tdr_def: " << tdr_line << " = " << num(total_power) << "\n";
  out << constraints.str();
  out << "Bounds\n";
  out << " " << num(window_lo) << " <= TDR <= " << num(window_hi) << "\n";
  out << bounds.str();
  out << "Binary\n";
  out << binaries.str();
  out << "End\n";
  return out.str();
}

std::vector<std::pair<std::string, double>> milp_assignment(
    const std::vector<ResidentProfile>& profiles, const std::vector<ThermalState>& states,
    const SolveResult& result, const DrrRequest& request, const ObjectiveConfig& /*config*/) {
  if (profiles.size() != states.size()) {
    throw std::invalid_argument("milp_assignment: profiles and states must be aligned");
  }
  const std::vector<std::string> names = build_lp_names(profiles);

  std::vector<std::pair<std::string, double>> assignment;
  assignment.emplace_back("TDR", result.total_reduction_kw);
  for (size_t i = 0; i < profiles.size(); ++i) {
    const auto& profile = profiles[i];
    const ResidentDecision* decision = result.decision.find(profile.id);
    if (decision == nullptr) {
      throw std::invalid_argument("milp_assignment: decision misses resident " + profile.id);
    }
    if (profile.ac) {
      const bool on = decision->ac_on.value_or(true);
      const double temp = estimate_ac_temp(states[i], profile.ac->params, on, request.mode);
      assignment.emplace_back("SA_" + names[i], on ? 1.0 : 0.0);
      assignment.emplace_back("mu_" + names[i], temp <= profile.ac->comfort.high_f ? 1.0 : 0.0);
    }
    if (profile.ewh) {
      const bool on = decision->ewh_on.value_or(true);
      const double temp = estimate_ewh_temp(states[i], profile.ewh->params, on);
      assignment.emplace_back("SE_" + names[i], on ? 1.0 : 0.0);
      assignment.emplace_back("nu_" + names[i], temp >= profile.ewh->comfort.low_f ? 1.0 : 0.0);
    }
    if (profile.ac && profile.ewh) {
      const double product = (decision->ac_on.value_or(true) ? 1.0 : 0.0) *
                             (decision->ewh_on.value_or(true) ? 1.0 : 0.0);
      assignment.emplace_back("both_on_" + names[i], product);
    }
  }
  return assignment;
}

}  // namespace rla

#pragma once

#include <string>
#include <vector>

#include "rla/model.hpp"
#include "rla/solver.hpp"

namespace rla {

/// Writes one dispatch step as a mixed-integer linear program in LP text
/// format.
///
/// Variables: SA_<id> / SE_<id> are the appliance on/off statuses (1 = on),
/// mu_<id> / nu_<id> are the indicator binaries tied to the high-room /
/// low-tank thresholds through big-M constraints, and both_on_<id> is the
/// linearized SA*SE product for residents owning both appliances.
///
/// Because the predicted temperature of each appliance is an affine function
/// of its status, the objective can be written with precomputed per-option
/// cost constants instead of products of binaries; the constants (reward at
/// the classified tier plus the weighted squared comfort margin) are
/// documented in the file's comment header. Strict indicator inequalities
/// are rendered with an explicit epsilon slack, so temperatures that exceed
/// a threshold by less than epsilon are rejected rather than misclassified.
///
/// `profiles` and `states` must be aligned index by index.
std::string export_milp(const std::vector<ResidentProfile>& profiles,
                        const std::vector<ThermalState>& states, const DrrRequest& request,
                        const RewardSchedule& schedule, const ObjectiveConfig& config);

/// Variable-assignment helper for checking an exported model against a
/// solver decision: statuses from the decision, mu/nu at the values the
/// big-M constraints force for the predicted temperatures, both_on as the
/// product, TDR as the achieved reduction.
std::vector<std::pair<std::string, double>> milp_assignment(
    const std::vector<ResidentProfile>& profiles, const std::vector<ThermalState>& states,
    const SolveResult& result, const DrrRequest& request, const ObjectiveConfig& config);

/// LP-safe variable name for a resident id (alphanumerics kept, everything
/// else mapped to '_', with a disambiguating suffix when ids collide).
std::string lp_identifier(const std::string& id);

}  // namespace rla

#pragma once

#include <map>
#include <string>
#include <vector>

#include "nhdyn/constraints.hpp"

namespace nhdyn {

/// A built-in worked example: the validated problem, its parameter values,
/// and a canonical on-constraint initial state for demos and sampling.
struct ScenarioSpec {
  std::string name;
  std::map<std::string, double> params;
  NonholonomicProblem problem;
  State defaultState;
  bool hasClosedForm = false;
};

/// Names accepted by buildScenario, in presentation order.
const std::vector<std::string>& scenarioNames();

/// Construct a built-in scenario; overrides replace default parameter values
/// by name. Unknown scenario names raise UnknownScenario, unknown or
/// non-finite overrides raise InvalidParam.
ScenarioSpec buildScenario(const std::string& name,
                           const std::map<std::string, double>& overrides = {});

/// Exact analytic state at time t for scenarios with a closed form
/// (free_particle, rolling_disk, appell_rho0, benenti_points); s0 must lie
/// on C. Raises NoClosedForm otherwise.
State oracleState(const ScenarioSpec& spec, const State& s0, double t);

}  // namespace nhdyn

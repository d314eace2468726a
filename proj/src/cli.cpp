#include "nhdyn/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "nhdyn/problem_file.hpp"
#include "nhdyn/sampling.hpp"
#include "nhdyn/scenarios.hpp"
#include "nhdyn/trajectory_io.hpp"

namespace nhdyn {

namespace {

struct ProblemSource {
  std::string scenario;
  std::string file;
  std::vector<std::string> paramOverrides;  // name=value
};

void addSourceOptions(CLI::App* cmd, ProblemSource& src, bool withParams = true) {
  auto* s = cmd->add_option("--scenario", src.scenario, "built-in scenario name");
  auto* f = cmd->add_option("--file", src.file, "problem definition file");
  s->excludes(f);
  if (withParams)
    cmd->add_option("--param", src.paramOverrides, "override a scenario parameter (name=value)");
}

std::map<std::string, double> parseOverrides(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--param", "expected name=value, got '" + item + "'");
    char* end = nullptr;
    std::string valueText = item.substr(eq + 1);
    double value = std::strtod(valueText.c_str(), &end);
    if (end != valueText.c_str() + valueText.size())
      throw CLI::ValidationError("--param", "malformed value in '" + item + "'");
    out[item.substr(0, eq)] = value;
  }
  return out;
}

struct LoadedProblem {
  NonholonomicProblem problem;
  std::optional<State> defaultState;
  std::string label;
};

LoadedProblem loadSource(const ProblemSource& src) {
  if (!src.scenario.empty()) {
    ScenarioSpec spec = buildScenario(src.scenario, parseOverrides(src.paramOverrides));
    return {std::move(spec.problem), spec.defaultState, src.scenario};
  }
  if (!src.file.empty()) {
    if (!src.paramOverrides.empty())
      throw CLI::ValidationError("--param", "parameter overrides apply to scenarios only");
    return {loadProblemFile(src.file), std::nullopt, src.file};
  }
  throw CLI::RequiredError("--scenario or --file");
}

State parseStateRow(const std::string& text, int n) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string field;
  while (std::getline(in, field, ',')) {
    char* end = nullptr;
    double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str()) throw Error("malformed state entry '" + field + "'");
    values.push_back(v);
  }
  if (static_cast<int>(values.size()) != 2 * n)
    throw Error("state row needs " + std::to_string(2 * n) + " comma-separated reals (q then v), got " +
                std::to_string(values.size()));
  State s{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (int i = 0; i < n; ++i) {
    s.q[i] = values[i];
    s.v[i] = values[n + i];
  }
  return s;
}

std::string formatReal(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

int runCheck(const LoadedProblem& loaded, int samples, unsigned seed, bool verbose,
             std::ostream& out) {
  const auto& p = loaded.problem;
  std::vector<State> states;
  if (loaded.defaultState) states.push_back(*loaded.defaultState);
  auto sampled = sampleOnConstraintStates(p, samples, seed);
  states.insert(states.end(), sampled.begin(), sampled.end());

  const int total = static_cast<int>(states.size());
  int admissibleCount = 0, fullRankM = 0, rankCond = 0, interCond = 0, regular = 0, definite = 0;
  int unique = 0, under = 0, infeasible = 0;
  int minRank = p.annihilatorSize();
  double minRcond = std::numeric_limits<double>::infinity();

  for (int i = 0; i < total; ++i) {
    const State& s = states[i];
    auto adm = p.admissibility(s);
    auto cm = compatibilityMatrix(p, s);
    auto report = checkTheorem2(p, s);
    auto sol = solveSode(p, s);
    admissibleCount += adm.admissible;
    fullRankM += cm.rank == p.annihilatorSize();
    minRank = std::min(minRank, cm.rank);
    minRcond = std::min(minRcond, cm.rcond);
    rankCond += report.rankCondition;
    interCond += report.intersectionCondition;
    regular += report.regularity;
    definite += report.definiteHessian;
    unique += sol.classification == SodeClass::Unique;
    under += sol.classification == SodeClass::Underdetermined;
    infeasible += sol.classification == SodeClass::Infeasible;
    if (verbose) {
      out << "  state " << i << ": admissible=" << adm.admissible << " rank(M)=" << cm.rank
          << " rcond(M)=" << formatReal(cm.rcond) << " rank-cond=" << report.rankCondition
          << " intersection=" << report.intersectionCondition
          << " regularity=" << report.regularity << " definite=" << report.definiteHessian
          << " class=" << to_string(sol.classification) << "\n";
    }
  }

  out << "problem " << loaded.label << ": " << total << " on-constraint states (seed " << seed
      << (loaded.defaultState ? ", default state included" : "") << ")\n";
  out << "  admissible          : " << admissibleCount << "/" << total << " (min rank " << minRank
      << " of " << p.annihilatorSize() << ")\n";
  out << "  rank(M) = r+s       : " << fullRankM << "/" << total << " (min rcond(M) "
      << formatReal(minRcond) << ")\n";
  out << "  thm2 rank condition : " << rankCond << "/" << total << "\n";
  out << "  thm2 intersection   : " << interCond << "/" << total << "\n";
  out << "  regularity          : " << regular << "/" << total << "\n";
  out << "  definite hessian    : " << definite << "/" << total << "\n";
  out << "  classification      : unique " << unique << ", underdetermined " << under
      << ", infeasible " << infeasible << "\n";
  return unique == total ? 0 : 1;
}

int runSimulate(const LoadedProblem& loaded, const std::optional<std::string>& stateText,
                double h, double tEnd, bool project, bool allowUnderdetermined,
                const std::string& outPath, std::ostream& out, std::ostream& err) {
  const auto& p = loaded.problem;
  State s0;
  if (stateText)
    s0 = parseStateRow(*stateText, p.model().n());
  else if (loaded.defaultState)
    s0 = *loaded.defaultState;
  else
    throw CLI::RequiredError("--state (problem files carry no default state)");

  SimulateOptions opts;
  opts.project = project;
  opts.allowUnderdetermined = allowUnderdetermined;
  try {
    Trajectory traj = simulate(p, s0, h, tEnd, opts);
    writeTrajectoryCsv(p, traj, outPath);
    out << "wrote " << traj.size() << " rows to " << outPath;
    if (traj.nonUnique) out << " (non-unique multipliers: minimum-norm branch)";
    out << "\n";
    return 0;
  } catch (const StageFailure& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const ProjectionFailed& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const OffConstraintState& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int runAlgorithm(const LoadedProblem& loaded, const std::optional<std::string>& stateText,
                 int depth, std::ostream& out) {
  const auto& p = loaded.problem;
  State s;
  if (stateText)
    s = parseStateRow(*stateText, p.model().n());
  else if (loaded.defaultState)
    s = *loaded.defaultState;
  else
    throw CLI::RequiredError("--state (problem files carry no default state)");

  AlgorithmTrace trace = integrabilityAlgorithm(p, s, depth);
  for (const auto& step : trace.steps) {
    out << "step " << step.k << ": member=" << (step.memberOfCk ? "yes" : "no");
    if (step.k > 0) {
      out << " feasible=" << (step.feasible ? "yes" : "no");
      out << " residual=" << formatReal(step.appendedResidual);
    }
    out << "\n";
  }
  out << "verdict: " << to_string(trace.verdict);
  if (trace.verdict == AlgorithmVerdict::ExcludedAtStep) out << "(" << trace.excludedStep << ")";
  out << "\n";
  return 0;
}

int runScenarios(std::ostream& out) {
  for (const auto& name : scenarioNames()) {
    ScenarioSpec spec = buildScenario(name);
    out << name << ": n=" << spec.problem.model().n() << " r=" << spec.problem.r()
        << " s=" << spec.problem.s()
        << " forces=" << (spec.problem.forces().isChetaev() ? "chetaev" : "custom");
    if (!spec.params.empty()) {
      out << " params{";
      bool first = true;
      for (const auto& [pname, value] : spec.params) {
        out << (first ? "" : ", ") << pname << "=" << value;
        first = false;
      }
      out << "}";
    }
    out << "\n";
  }
  return 0;
}

}  // namespace

int runCommand(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"non-holonomic Lagrangian dynamics desk"};
  app.name("nhdyn");
  app.require_subcommand(1);

  ProblemSource checkSrc, simSrc, algSrc;
  int samples = 100;
  unsigned seed = 42;
  bool verbose = false;

  auto* check = app.add_subcommand(
      "check", "sample on-constraint states; report compatibility and Theorem-2 diagnostics");
  addSourceOptions(check, checkSrc);
  check->add_option("--samples", samples, "number of sampled states")->check(CLI::PositiveNumber);
  check->add_option("--seed", seed, "sampling seed");
  check->add_flag("--verbose", verbose, "print one row per state");

  std::optional<std::string> simState;
  double h = 1e-3, tEnd = 1.0;
  bool project = false, allowUnder = false;
  std::string outPath = "trajectory.csv";
  auto* sim = app.add_subcommand("simulate", "integrate the constrained dynamics, write CSV");
  addSourceOptions(sim, simSrc);
  sim->add_option("--state", simState, "initial state as 2n comma-separated reals (q then v)");
  sim->add_option("--h", h, "step size")->check(CLI::PositiveNumber);
  sim->add_option("--t-end", tEnd, "integration horizon")->check(CLI::PositiveNumber);
  sim->add_flag("--project", project, "re-project velocities onto C after each step");
  sim->add_flag("--allow-underdetermined", allowUnder,
                "integrate through underdetermined states with the minimum-norm multiplier");
  sim->add_option("--out", outPath, "output CSV path");

  std::optional<std::string> algState;
  int depth = 3;
  auto* alg = app.add_subcommand("algorithm", "run the integrability algorithm at one state");
  addSourceOptions(alg, algSrc);
  alg->add_option("--state", algState, "state as 2n comma-separated reals (q then v)");
  alg->add_option("--depth", depth, "maximum algorithm depth")->check(CLI::PositiveNumber);

  auto* list = app.add_subcommand("scenarios", "list built-in scenarios and their defaults");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (check->parsed()) return runCheck(loadSource(checkSrc), samples, seed, verbose, out);
    if (sim->parsed())
      return runSimulate(loadSource(simSrc), simState, h, tEnd, project, allowUnder, outPath, out,
                         err);
    if (alg->parsed()) return runAlgorithm(loadSource(algSrc), algState, depth, out);
    if (list->parsed()) return runScenarios(out);
  } catch (const CLI::Error& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "usage error: no subcommand\n";
  return 2;
}

}  // namespace nhdyn

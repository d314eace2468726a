#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "nhdyn/problem_file.hpp"
#include "nhdyn/sampling.hpp"
#include "nhdyn/scenarios.hpp"
#include "nhdyn/trajectory_io.hpp"

namespace py = pybind11;
using namespace nhdyn;

namespace {

Bindings bindingsFromDict(std::shared_ptr<const SymbolTable> table, const py::dict& values) {
  std::map<std::string, double> map;
  for (auto item : values) map[py::cast<std::string>(item.first)] = py::cast<double>(item.second);
  return Bindings::fromMap(std::move(table), map);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Non-holonomic Lagrangian dynamics: reaction-force bundles, multiplier "
            "elimination, integrability diagnostics and constrained integration.";

  py::register_exception<Error>(m, "NhdynError", PyExc_RuntimeError);

  py::enum_<VarKind>(m, "VarKind")
      .value("Coordinate", VarKind::Coordinate)
      .value("Velocity", VarKind::Velocity)
      .value("Parameter", VarKind::Parameter);

  py::enum_<SodeClass>(m, "SodeClass")
      .value("Unique", SodeClass::Unique)
      .value("Underdetermined", SodeClass::Underdetermined)
      .value("Infeasible", SodeClass::Infeasible);

  py::enum_<AlgorithmVerdict>(m, "AlgorithmVerdict")
      .value("CompatibleUnique", AlgorithmVerdict::CompatibleUnique)
      .value("CompatibleNonUnique", AlgorithmVerdict::CompatibleNonUnique)
      .value("ExcludedAtStep", AlgorithmVerdict::ExcludedAtStep)
      .value("DepthExhausted", AlgorithmVerdict::DepthExhausted);

  py::class_<SymbolTable, std::shared_ptr<SymbolTable>>(m, "SymbolTable")
      .def(py::init<std::vector<std::string>, std::vector<std::string>>(), py::arg("coords"),
           py::arg("params") = std::vector<std::string>{})
      .def_property_readonly("n", &SymbolTable::n)
      .def_property_readonly("coords", &SymbolTable::coords)
      .def_property_readonly("params", &SymbolTable::params);

  py::class_<Expression>(m, "Expression")
      .def_static(
          "parse",
          [](const std::string& text, std::shared_ptr<SymbolTable> table) {
            return Expression::parse(text, std::move(table));
          },
          py::arg("text"), py::arg("table"))
      .def(
          "eval",
          [](const Expression& e, const py::dict& values) {
            return e.eval(bindingsFromDict(e.tablePtr(), values));
          },
          py::arg("bindings"))
      .def("diff", [](const Expression& e, const std::string& var) { return e.diff(var); },
           py::arg("var"))
      .def("variable_names", &Expression::variableNames)
      .def("__str__", &Expression::str)
      .def("__repr__", [](const Expression& e) { return "Expression(" + e.str() + ")"; });

  py::class_<State>(m, "State")
      .def(py::init<Eigen::VectorXd, Eigen::VectorXd>(), py::arg("q"), py::arg("v"))
      .def_readwrite("q", &State::q)
      .def_readwrite("v", &State::v)
      .def("__repr__", [](const State& s) {
        std::ostringstream out;
        out << "State(q=" << s.q.transpose() << ", v=" << s.v.transpose() << ")";
        return out.str();
      });

  py::class_<SymplecticData>(m, "SymplecticData")
      .def_readonly("omega", &SymplecticData::omega)
      .def_readonly("lam", &SymplecticData::lambda)
      .def("w_block", &SymplecticData::wBlock);

  py::class_<LagrangianModel>(m, "LagrangianModel")
      .def(py::init<std::vector<std::string>, std::vector<std::pair<std::string, double>>,
                    std::string>(),
           py::arg("coords"), py::arg("params"), py::arg("lagrangian"))
      .def_property_readonly("n", &LagrangianModel::n)
      .def_property_readonly("coords", &LagrangianModel::coords)
      .def("hessian", &LagrangianModel::hessian)
      .def("free_acceleration", &LagrangianModel::freeAcceleration)
      .def("energy", &LagrangianModel::energy)
      .def("legendre", &LagrangianModel::legendre)
      .def("symplectic_data", &LagrangianModel::symplecticData);

  py::class_<AdmissibilityReport>(m, "AdmissibilityReport")
      .def_readonly("admissible", &AdmissibilityReport::admissible)
      .def_readonly("rank", &AdmissibilityReport::rank);

  py::class_<NonholonomicProblem>(m, "NonholonomicProblem")
      .def_static(
          "build",
          [](LagrangianModel model, std::vector<std::string> psi,
             std::vector<std::vector<std::string>> directions, bool chetaev,
             std::vector<std::vector<std::string>> forces) {
            return NonholonomicProblem::build(std::move(model), std::move(psi),
                                              std::move(directions), chetaev, std::move(forces));
          },
          py::arg("model"), py::arg("psi") = std::vector<std::string>{},
          py::arg("directions") = std::vector<std::vector<std::string>>{},
          py::arg("chetaev") = true,
          py::arg("forces") = std::vector<std::vector<std::string>>{})
      .def_property_readonly("model", &NonholonomicProblem::model)
      .def_property_readonly("r", &NonholonomicProblem::r)
      .def_property_readonly("s", &NonholonomicProblem::s)
      .def("psi_values", &NonholonomicProblem::psiValues)
      .def("annihilator_basis", &NonholonomicProblem::annihilatorBasis)
      .def("chetaev_forces", &NonholonomicProblem::chetaevForces)
      .def("force_rows", &NonholonomicProblem::forceRows)
      .def("admissibility", &NonholonomicProblem::admissibility);

  py::class_<CompatibilityMatrix>(m, "CompatibilityMatrix")
      .def_readonly("M", &CompatibilityMatrix::M)
      .def_readonly("rank", &CompatibilityMatrix::rank)
      .def_readonly("rcond", &CompatibilityMatrix::rcond);

  py::class_<SodeResult>(m, "SodeResult")
      .def_readonly("classification", &SodeResult::classification)
      .def_readonly("kernel_dim", &SodeResult::kernelDim)
      .def_readonly("a", &SodeResult::a)
      .def_readonly("lam", &SodeResult::lambda)
      .def_readonly("residual", &SodeResult::residual);

  py::class_<TheoremReport>(m, "TheoremReport")
      .def_readonly("rank_condition", &TheoremReport::rankCondition)
      .def_readonly("intersection_condition", &TheoremReport::intersectionCondition)
      .def_readonly("regularity", &TheoremReport::regularity)
      .def_readonly("definite_hessian", &TheoremReport::definiteHessian)
      .def_readonly("force_rank", &TheoremReport::forceRank)
      .def_readonly("annihilator_rank", &TheoremReport::annihilatorRank)
      .def_readonly("intersection_dim", &TheoremReport::intersectionDim);

  py::class_<AlgorithmStep>(m, "AlgorithmStep")
      .def_readonly("k", &AlgorithmStep::k)
      .def_readonly("member", &AlgorithmStep::memberOfCk)
      .def_readonly("feasible", &AlgorithmStep::feasible)
      .def_readonly("appended_residual", &AlgorithmStep::appendedResidual);

  py::class_<AlgorithmTrace>(m, "AlgorithmTrace")
      .def_readonly("steps", &AlgorithmTrace::steps)
      .def_readonly("verdict", &AlgorithmTrace::verdict)
      .def_readonly("excluded_step", &AlgorithmTrace::excludedStep);

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("times", &Trajectory::times)
      .def_readonly("states", &Trajectory::states)
      .def_readonly("energy", &Trajectory::energy)
      .def_readonly("psi_residuals", &Trajectory::psiResiduals)
      .def_readonly("lambdas", &Trajectory::lambdas)
      .def_readonly("momenta", &Trajectory::momenta)
      .def_readonly("non_unique", &Trajectory::nonUnique)
      .def("__len__", &Trajectory::size);

  py::class_<ScenarioSpec>(m, "ScenarioSpec")
      .def_readonly("name", &ScenarioSpec::name)
      .def_readonly("params", &ScenarioSpec::params)
      .def_readonly("problem", &ScenarioSpec::problem)
      .def_readonly("default_state", &ScenarioSpec::defaultState)
      .def_readonly("has_closed_form", &ScenarioSpec::hasClosedForm);

  m.def("scenario_names", [] { return scenarioNames(); });
  m.def("build_scenario", &buildScenario, py::arg("name"),
        py::arg("overrides") = std::map<std::string, double>{});
  m.def("oracle_state", &oracleState, py::arg("scenario"), py::arg("s0"), py::arg("t"));

  m.def("compatibility_matrix", &compatibilityMatrix, py::arg("problem"), py::arg("state"));
  m.def("solve_sode", &solveSode, py::arg("problem"), py::arg("state"));
  m.def("check_theorem2", &checkTheorem2, py::arg("problem"), py::arg("state"));
  m.def("integrability_algorithm", &integrabilityAlgorithm, py::arg("problem"), py::arg("state"),
        py::arg("max_depth") = 3);

  m.def(
      "rk4_step",
      [](const NonholonomicProblem& p, const State& s, double h, bool project,
         bool allowUnderdetermined) {
        SimulateOptions opts{project, allowUnderdetermined};
        return rk4Step(p, s, h, opts);
      },
      py::arg("problem"), py::arg("state"), py::arg("h"), py::arg("project") = false,
      py::arg("allow_underdetermined") = false);
  m.def("project_to_constraints", &projectToConstraints, py::arg("problem"), py::arg("state"));
  m.def(
      "simulate",
      [](const NonholonomicProblem& p, const State& s0, double h, double tEnd, bool project,
         bool allowUnderdetermined) {
        SimulateOptions opts{project, allowUnderdetermined};
        return simulate(p, s0, h, tEnd, opts);
      },
      py::arg("problem"), py::arg("s0"), py::arg("h"), py::arg("t_end"),
      py::arg("project") = false, py::arg("allow_underdetermined") = false);

  m.def("sample_on_constraint_states", &sampleOnConstraintStates, py::arg("problem"),
        py::arg("count"), py::arg("seed") = 42u);

  m.def("load_problem_file", &loadProblemFile, py::arg("path"));
  m.def("parse_problem_text", &parseProblemText, py::arg("text"));
  m.def("problem_file_text", &problemFileText, py::arg("problem"));
  m.def(
      "write_trajectory_csv",
      [](const NonholonomicProblem& p, const Trajectory& t, const std::string& path) {
        writeTrajectoryCsv(p, t, path);
      },
      py::arg("problem"), py::arg("trajectory"), py::arg("path"));
  m.def("trajectory_csv_header", &trajectoryCsvHeader, py::arg("problem"));
}

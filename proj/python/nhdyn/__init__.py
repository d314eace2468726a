"""Non-holonomic Lagrangian dynamics.

Reaction-force bundles, compatibility and regularity diagnostics, multiplier
elimination for the constrained second-order dynamics, the pointwise
integrability algorithm, and RK4 integration with conservation monitors.
"""

from ._core import (
    AdmissibilityReport,
    AlgorithmStep,
    AlgorithmTrace,
    AlgorithmVerdict,
    CompatibilityMatrix,
    Expression,
    LagrangianModel,
    NhdynError,
    NonholonomicProblem,
    ScenarioSpec,
    SodeClass,
    SodeResult,
    State,
    SymbolTable,
    SymplecticData,
    TheoremReport,
    Trajectory,
    VarKind,
    build_scenario,
    check_theorem2,
    compatibility_matrix,
    integrability_algorithm,
    load_problem_file,
    oracle_state,
    parse_problem_text,
    problem_file_text,
    project_to_constraints,
    rk4_step,
    sample_on_constraint_states,
    scenario_names,
    simulate,
    solve_sode,
    trajectory_csv_header,
    write_trajectory_csv,
)

__all__ = [
    "AdmissibilityReport",
    "AlgorithmStep",
    "AlgorithmTrace",
    "AlgorithmVerdict",
    "CompatibilityMatrix",
    "Expression",
    "LagrangianModel",
    "NhdynError",
    "NonholonomicProblem",
    "ScenarioSpec",
    "SodeClass",
    "SodeResult",
    "State",
    "SymbolTable",
    "SymplecticData",
    "TheoremReport",
    "Trajectory",
    "VarKind",
    "build_scenario",
    "check_theorem2",
    "compatibility_matrix",
    "integrability_algorithm",
    "load_problem_file",
    "oracle_state",
    "parse_problem_text",
    "problem_file_text",
    "project_to_constraints",
    "rk4_step",
    "sample_on_constraint_states",
    "scenario_names",
    "simulate",
    "solve_sode",
    "trajectory_csv_header",
    "write_trajectory_csv",
]

__version__ = "0.1.0"

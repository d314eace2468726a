#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "nhdyn/constraints.hpp"

namespace nhdyn {

/// The pairing M^{BC} = W^{ij} f_i^B β_j^C between force covectors (rows)
/// and D⁰ basis covectors (columns); invertibility is the compatibility
/// condition.
struct CompatibilityMatrix {
  Eigen::MatrixXd M;
  int rank = 0;
  double rcond = 1.0;
};

enum class SodeClass { Unique, Underdetermined, Infeasible };

std::string to_string(SodeClass c);

/// Outcome of multiplier elimination at one state. When a solution exists,
/// the prolonged field is (v, a) — a SODE evaluation by construction.
struct SodeResult {
  SodeClass classification = SodeClass::Unique;
  int kernelDim = 0;               // Underdetermined only
  Eigen::VectorXd a;               // empty when Infeasible
  Eigen::VectorXd lambda;          // minimum-norm when Underdetermined; empty when Infeasible
  double residual = 0.0;           // least-squares infeasibility certificate

  bool hasSolution() const { return classification != SodeClass::Infeasible; }
};

/// The Theorem-2 hypotheses and related regularity conditions, each decided
/// by explicit rank arithmetic on evaluated matrices. `corank D` is the
/// nominal r+s; the underlying dimensions are exposed alongside the flags.
struct TheoremReport {
  bool rankCondition = false;          // rank F == r+s
  bool intersectionCondition = false;  // D⁰ ∩ F^⊥ = 0 with D⁰ of full rank
  bool regularity = false;             // S_C ∩ TC = 0 with dΨ of full rank
  bool definiteHessian = false;

  int forceRank = 0;
  int annihilatorRank = 0;
  int intersectionDim = 0;
  int dPsiRank = 0;
  int scTcIntersectionDim = 0;
};

struct AlgorithmStep {
  int k = 0;
  bool memberOfCk = false;
  bool feasible = false;
  double appendedResidual = 0.0;
};

enum class AlgorithmVerdict { CompatibleUnique, CompatibleNonUnique, ExcludedAtStep, DepthExhausted };

std::string to_string(AlgorithmVerdict v);

struct AlgorithmTrace {
  std::vector<AlgorithmStep> steps;
  AlgorithmVerdict verdict = AlgorithmVerdict::DepthExhausted;
  int excludedStep = -1;  // valid when verdict == ExcludedAtStep
};

CompatibilityMatrix compatibilityMatrix(const NonholonomicProblem& p, const State& s);

/// Solve the multiplier system at s and assemble the constrained
/// acceleration a = a_free + H⁻¹ Σ_C λ_C f^C. The state need not lie on C.
SodeResult solveSode(const NonholonomicProblem& p, const State& s);

TheoremReport checkTheorem2(const NonholonomicProblem& p, const State& s);

/// Pointwise adapted integrability algorithm. Membership tolerance 1e-9;
/// infeasibility residuals are appended as constraints with
/// finite-difference gradients (step 1e-6) up to maxDepth.
AlgorithmTrace integrabilityAlgorithm(const NonholonomicProblem& p, const State& s,
                                      int maxDepth = 3);

namespace detail {

/// Multiplier solve with extra annihilator rows (2n-wide) appended to D⁰;
/// used by the integrability algorithm.
SodeResult solveWithExtraRows(const NonholonomicProblem& p, const State& s,
                              const Eigen::MatrixXd& extraRows);

}  // namespace detail

}  // namespace nhdyn

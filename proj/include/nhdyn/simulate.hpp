#pragma once

#include <vector>

#include "nhdyn/solver.hpp"

namespace nhdyn {

/// Time series of states with energy, constraint-residual, multiplier and
/// momentum monitors; all lists share one length, times strictly increase.
struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  std::vector<double> energy;
  std::vector<Eigen::VectorXd> psiResiduals;  // r-vectors
  std::vector<Eigen::VectorXd> lambdas;       // (r+s)-vectors
  std::vector<Eigen::VectorXd> momenta;       // n-vectors
  bool nonUnique = false;  // an underdetermined state was integrated

  std::size_t size() const { return times.size(); }
};

struct SimulateOptions {
  bool project = false;              // re-project velocities onto C after each step
  bool allowUnderdetermined = false; // integrate through Underdetermined with min-norm λ
};

/// One classical RK4 step of the prolonged field (v, a). Throws StageFailure
/// when a stage state is Infeasible (or Underdetermined without opt-in) and
/// NonFiniteState on non-finite input or output. `sawUnderdetermined`, when
/// non-null, is set if any stage was underdetermined.
State rk4Step(const NonholonomicProblem& p, const State& s, double h,
              const SimulateOptions& opts = {}, bool* sawUnderdetermined = nullptr);

/// Newton projection of the velocities onto C, minimizing the H-metric norm
/// of the correction; q is left unchanged. Terminates at max |Ψ| ≤ 1e-12 or
/// fails after 20 iterations.
State projectToConstraints(const NonholonomicProblem& p, const State& s);

/// Fixed-step RK4 integration with monitors recorded at every step. s0 must
/// lie on C within 1e-9 unless opts.project is set, in which case it is
/// projected first. The last step is shortened to land on tEnd exactly.
Trajectory simulate(const NonholonomicProblem& p, const State& s0, double h, double tEnd,
                    const SimulateOptions& opts = {});

}  // namespace nhdyn

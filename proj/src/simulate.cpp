#include "nhdyn/simulate.hpp"

#include <cmath>
#include <limits>

namespace nhdyn {

namespace {

constexpr double kOnConstraintTol = 1e-9;
constexpr double kProjectionTol = 1e-12;
constexpr int kProjectionMaxIter = 20;

Eigen::VectorXd stageAcceleration(const NonholonomicProblem& p, const State& s, int stage,
                                  const SimulateOptions& opts, bool* sawUnderdetermined) {
  SodeResult result = solveSode(p, s);
  if (result.classification == SodeClass::Infeasible)
    throw StageFailure(stage, to_string(result.classification));
  if (result.classification == SodeClass::Underdetermined) {
    if (!opts.allowUnderdetermined) throw StageFailure(stage, to_string(result.classification));
    if (sawUnderdetermined) *sawUnderdetermined = true;
  }
  return result.a;
}

}  // namespace

State rk4Step(const NonholonomicProblem& p, const State& s, double h,
              const SimulateOptions& opts, bool* sawUnderdetermined) {
  if (h <= 0.0) throw Error("step size must be positive");
  if (!s.allFinite()) throw NonFiniteState();

  // The prolonged field is (v, a): the first n components of every stage
  // derivative are literally the stage velocity.
  State x1 = s;
  Eigen::VectorXd a1 = stageAcceleration(p, x1, 1, opts, sawUnderdetermined);

  State x2{s.q + 0.5 * h * x1.v, s.v + 0.5 * h * a1};
  Eigen::VectorXd a2 = stageAcceleration(p, x2, 2, opts, sawUnderdetermined);

  State x3{s.q + 0.5 * h * x2.v, s.v + 0.5 * h * a2};
  Eigen::VectorXd a3 = stageAcceleration(p, x3, 3, opts, sawUnderdetermined);

  State x4{s.q + h * x3.v, s.v + h * a3};
  Eigen::VectorXd a4 = stageAcceleration(p, x4, 4, opts, sawUnderdetermined);

  State out{s.q + h * ((x1.v + 2.0 * x2.v + 2.0 * x3.v + x4.v) / 6.0),
            s.v + h * ((a1 + 2.0 * a2 + 2.0 * a3 + a4) / 6.0)};
  if (!out.allFinite()) throw NonFiniteState();
  return out;
}

State projectToConstraints(const NonholonomicProblem& p, const State& s) {
  if (!s.allFinite()) throw NonFiniteState();
  if (p.r() == 0) return s;

  State x = s;
  Eigen::VectorXd psi = p.psiValues(x);
  if (psi.cwiseAbs().maxCoeff() <= kProjectionTol) return s;

  for (int iter = 0; iter < kProjectionMaxIter; ++iter) {
    const int n = p.model().n();
    Eigen::MatrixXd jac = p.annihilatorBasis(x).topRows(p.r()).rightCols(n);  // dΨ/∂v
    if (NonholonomicProblem::numericalRank(jac) < p.r()) throw NotProjectable();

    // Minimum H-norm correction of the linearized constraints:
    //   δ = -W Jᵀ (J W Jᵀ)⁻¹ Ψ
    Eigen::MatrixXd w = p.model().hessianInverse(x);
    Eigen::MatrixXd k = jac * w * jac.transpose();
    Eigen::VectorXd mu = k.ldlt().solve(psi);
    x.v -= w * jac.transpose() * mu;

    psi = p.psiValues(x);
    if (psi.cwiseAbs().maxCoeff() <= kProjectionTol) return x;
  }
  throw ProjectionFailed(psi.cwiseAbs().maxCoeff());
}

Trajectory simulate(const NonholonomicProblem& p, const State& s0, double h, double tEnd,
                    const SimulateOptions& opts) {
  if (h <= 0.0) throw Error("step size must be positive");
  if (tEnd <= 0.0) throw Error("tEnd must be positive");
  if (!s0.allFinite()) throw NonFiniteState();

  State current = s0;
  if (p.r() > 0) {
    double violation = p.psiValues(current).cwiseAbs().maxCoeff();
    if (violation > kOnConstraintTol) {
      if (!opts.project) throw OffConstraintState(violation);
      current = projectToConstraints(p, current);
    }
  }

  Trajectory traj;
  auto record = [&](double t, const State& s) {
    traj.times.push_back(t);
    traj.states.push_back(s);
    traj.energy.push_back(p.model().energy(s));
    traj.psiResiduals.push_back(p.psiValues(s));
    traj.momenta.push_back(p.model().legendre(s));
    SodeResult r = solveSode(p, s);
    if (r.classification == SodeClass::Underdetermined) traj.nonUnique = true;
    if (r.hasSolution())
      traj.lambdas.push_back(r.lambda);
    else
      traj.lambdas.push_back(Eigen::VectorXd::Constant(
          p.annihilatorSize(), std::numeric_limits<double>::quiet_NaN()));
  };

  record(0.0, current);
  double t = 0.0;
  const double tiny = 1e-12 * std::max(1.0, tEnd);
  while (t < tEnd - tiny) {
    double step = std::min(h, tEnd - t);
    try {
      current = rk4Step(p, current, step, opts, &traj.nonUnique);
      if (opts.project) current = projectToConstraints(p, current);
    } catch (const StageFailure& e) {
      throw StageFailure(e.stage, e.classification, t);
    } catch (const ProjectionFailed& e) {
      throw ProjectionFailed(e.residual, t);
    }
    t += step;
    record(t, current);
  }
  return traj;
}

}  // namespace nhdyn

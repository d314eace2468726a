#include "nhdyn/sampling.hpp"

#include <random>

namespace nhdyn {

std::vector<State> sampleOnConstraintStates(const NonholonomicProblem& p, int count,
                                            unsigned seed) {
  const int n = p.model().n();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);

  std::vector<State> states;
  states.reserve(count);
  while (static_cast<int>(states.size()) < count) {
    bool accepted = false;
    for (int attempt = 0; attempt < 50 && !accepted; ++attempt) {
      State seedState{Eigen::VectorXd::NullaryExpr(n, [&](Eigen::Index) { return uniform(rng); }),
                      Eigen::VectorXd::NullaryExpr(n, [&](Eigen::Index) { return uniform(rng); })};
      try {
        states.push_back(projectToConstraints(p, seedState));
        accepted = true;
      } catch (const Error&) {
        // rank-deficient seed or projection failure: redraw
      }
    }
    if (!accepted) throw Error("could not sample an on-constraint state after 50 attempts");
  }
  return states;
}

}  // namespace nhdyn

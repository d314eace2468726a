#pragma once

#include <vector>

#include "nhdyn/simulate.hpp"

namespace nhdyn {

/// Draw `count` on-constraint states: q and velocity seeds uniform in
/// [-1,1]^n, velocities then projected onto C in the H-metric. Seeds whose
/// projection fails or leaves the Hessian singular are discarded and
/// redrawn (up to 50 attempts per state). Deterministic in `seed`.
std::vector<State> sampleOnConstraintStates(const NonholonomicProblem& p, int count,
                                            unsigned seed);

}  // namespace nhdyn

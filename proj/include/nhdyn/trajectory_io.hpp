#pragma once

#include <iosfwd>
#include <string>

#include "nhdyn/simulate.hpp"

namespace nhdyn {

/// Header for the trajectory CSV of `problem`:
///   t,q_<name>...,v_<name>...,E,psi_1..psi_r,lambda_1..lambda_{r+s},p_1..p_n
std::string trajectoryCsvHeader(const NonholonomicProblem& problem);

/// Write the trajectory as CSV: one row per recorded step, reals with 17
/// significant digits, '\n' line ends, no locale formatting.
void writeTrajectoryCsv(const NonholonomicProblem& problem, const Trajectory& trajectory,
                        const std::string& path);

void writeTrajectoryCsv(const NonholonomicProblem& problem, const Trajectory& trajectory,
                        std::ostream& out);

}  // namespace nhdyn

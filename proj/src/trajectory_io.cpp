#include "nhdyn/trajectory_io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace nhdyn {

namespace {

void appendReal(std::string& row, double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  row.append(buf, res.ptr);
}

}  // namespace

std::string trajectoryCsvHeader(const NonholonomicProblem& problem) {
  std::ostringstream h;
  h << "t";
  for (const auto& c : problem.model().coords()) h << ",q_" << c;
  for (const auto& c : problem.model().coords()) h << ",v_" << c;
  h << ",E";
  for (int a = 1; a <= problem.r(); ++a) h << ",psi_" << a;
  for (int c = 1; c <= problem.annihilatorSize(); ++c) h << ",lambda_" << c;
  for (int i = 1; i <= problem.model().n(); ++i) h << ",p_" << i;
  return h.str();
}

void writeTrajectoryCsv(const NonholonomicProblem& problem, const Trajectory& trajectory,
                        std::ostream& out) {
  out << trajectoryCsvHeader(problem) << "\n";
  std::string row;
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    row.clear();
    appendReal(row, trajectory.times[k]);
    const State& s = trajectory.states[k];
    for (Eigen::Index i = 0; i < s.q.size(); ++i) {
      row.push_back(',');
      appendReal(row, s.q[i]);
    }
    for (Eigen::Index i = 0; i < s.v.size(); ++i) {
      row.push_back(',');
      appendReal(row, s.v[i]);
    }
    row.push_back(',');
    appendReal(row, trajectory.energy[k]);
    for (Eigen::Index i = 0; i < trajectory.psiResiduals[k].size(); ++i) {
      row.push_back(',');
      appendReal(row, trajectory.psiResiduals[k][i]);
    }
    for (Eigen::Index i = 0; i < trajectory.lambdas[k].size(); ++i) {
      row.push_back(',');
      appendReal(row, trajectory.lambdas[k][i]);
    }
    for (Eigen::Index i = 0; i < trajectory.momenta[k].size(); ++i) {
      row.push_back(',');
      appendReal(row, trajectory.momenta[k][i]);
    }
    out << row << "\n";
  }
}

void writeTrajectoryCsv(const NonholonomicProblem& problem, const Trajectory& trajectory,
                        const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError("cannot open '" + path + "' for writing");
  writeTrajectoryCsv(problem, trajectory, out);
  if (!out) throw FileError("failed writing '" + path + "'");
}

}  // namespace nhdyn

#include "nhdyn/problem_file.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace nhdyn {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = 0, end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

std::vector<std::string> splitWhitespace(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string word;
  while (in >> word) out.push_back(word);
  return out;
}

/// Split on commas at parenthesis depth zero.
std::vector<std::string> splitTopLevelCommas(const std::string& s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string current;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  out.push_back(trim(current));
  return out;
}

struct RawProblem {
  std::vector<std::string> coords;
  std::vector<std::pair<std::string, double>> params;
  std::string lagrangian;
  int lagrangianLine = 0;
  std::vector<std::pair<std::string, int>> constraints;           // text, line
  std::vector<std::pair<std::vector<std::string>, int>> directions;
  std::vector<std::pair<std::vector<std::string>, int>> forceRows;
  bool chetaev = false;
  bool sawForcesKeyword = false;
};

NonholonomicProblem buildFromRaw(const RawProblem& raw) {
  if (raw.coords.empty()) throw SectionError(1, "missing 'coords' section");
  if (raw.lagrangian.empty()) throw SectionError(1, "missing 'lagrangian' section");
  if (raw.sawForcesKeyword && !raw.forceRows.empty())
    throw SectionError(raw.forceRows.front().second,
                       "'force' rows conflict with 'forces chetaev'");
  bool constrained = !raw.constraints.empty() || !raw.directions.empty();
  if (constrained && !raw.sawForcesKeyword && raw.forceRows.empty())
    throw SectionError(raw.constraints.empty() ? raw.directions.front().second
                                               : raw.constraints.front().second,
                       "constrained problem needs 'forces chetaev' or 'force' rows");

  auto guard = [](int line, auto&& fn) {
    try {
      return fn();
    } catch (const SyntaxError& e) {
      throw SectionError(line, e.what());
    }
  };

  LagrangianModel model = guard(raw.lagrangianLine, [&] {
    return LagrangianModel(raw.coords, raw.params, raw.lagrangian);
  });

  std::vector<std::string> psi;
  for (const auto& [text, line] : raw.constraints)
    guard(line, [&] {
      Expression::parse(text, model.table());
      psi.push_back(text);
      return 0;
    });

  std::vector<std::vector<std::string>> directions;
  for (const auto& [row, line] : raw.directions)
    guard(line, [&] {
      for (const auto& text : row) Expression::parse(text, model.table());
      directions.push_back(row);
      return 0;
    });

  std::vector<std::vector<std::string>> forces;
  for (const auto& [row, line] : raw.forceRows)
    guard(line, [&] {
      for (const auto& text : row) Expression::parse(text, model.table());
      forces.push_back(row);
      return 0;
    });

  bool chetaev = raw.sawForcesKeyword ? raw.chetaev : raw.forceRows.empty();
  return NonholonomicProblem::build(std::move(model), std::move(psi), std::move(directions),
                                    chetaev, std::move(forces));
}

RawProblem scan(std::istream& in) {
  RawProblem raw;
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;

    std::istringstream ls(stripped);
    std::string keyword;
    ls >> keyword;
    std::string rest = trim(stripped.substr(keyword.size()));

    if (keyword == "coords") {
      if (!raw.coords.empty()) throw SectionError(lineNo, "duplicate 'coords' section");
      raw.coords = splitWhitespace(rest);
      if (raw.coords.empty()) throw SectionError(lineNo, "'coords' lists no names");
    } else if (keyword == "param") {
      auto eq = rest.find('=');
      if (eq == std::string::npos) throw SectionError(lineNo, "expected 'param <name> = <value>'");
      std::string name = trim(rest.substr(0, eq));
      std::string valueText = trim(rest.substr(eq + 1));
      if (name.empty() || valueText.empty())
        throw SectionError(lineNo, "expected 'param <name> = <value>'");
      char* end = nullptr;
      double value = std::strtod(valueText.c_str(), &end);
      if (end != valueText.c_str() + valueText.size())
        throw SectionError(lineNo, "malformed parameter value '" + valueText + "'");
      raw.params.emplace_back(name, value);
    } else if (keyword == "lagrangian") {
      if (!raw.lagrangian.empty()) throw SectionError(lineNo, "duplicate 'lagrangian' section");
      if (rest.empty()) throw SectionError(lineNo, "'lagrangian' line has no expression");
      raw.lagrangian = rest;
      raw.lagrangianLine = lineNo;
    } else if (keyword == "constraint") {
      if (rest.empty()) throw SectionError(lineNo, "'constraint' line has no expression");
      raw.constraints.emplace_back(rest, lineNo);
    } else if (keyword == "direction") {
      raw.directions.emplace_back(splitTopLevelCommas(rest), lineNo);
    } else if (keyword == "forces") {
      if (rest != "chetaev")
        throw SectionError(lineNo, "'forces' accepts only the keyword 'chetaev'");
      if (raw.sawForcesKeyword) throw SectionError(lineNo, "duplicate 'forces' section");
      raw.sawForcesKeyword = true;
      raw.chetaev = true;
    } else if (keyword == "force") {
      raw.forceRows.emplace_back(splitTopLevelCommas(rest), lineNo);
    } else {
      throw SectionError(lineNo, "unknown section keyword '" + keyword + "'");
    }
  }
  return raw;
}

}  // namespace

NonholonomicProblem parseProblemText(const std::string& text) {
  std::istringstream in(text);
  return buildFromRaw(scan(in));
}

NonholonomicProblem loadProblemFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open problem file '" + path + "'");
  return buildFromRaw(scan(in));
}

std::string problemFileText(const NonholonomicProblem& problem) {
  const auto& model = problem.model();
  std::ostringstream out;
  out << "coords";
  for (const auto& c : model.coords()) out << " " << c;
  out << "\n";
  for (const auto& [name, value] : model.params()) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    out << "param " << name << " = " << buf << "\n";
  }
  out << "lagrangian " << model.lagrangian().str() << "\n";
  for (const auto& psi : problem.psi()) out << "constraint " << psi.str() << "\n";
  for (const auto& d : problem.directions()) {
    out << "direction ";
    for (std::size_t i = 0; i < d.gamma.size(); ++i) out << (i ? ", " : "") << d.gamma[i].str();
    for (const auto& b : d.beta) out << ", " << b.str();
    out << "\n";
  }
  if (problem.forces().isChetaev()) {
    if (!problem.unconstrained()) out << "forces chetaev\n";
  } else {
    for (const auto& f : problem.forces().covectors()) {
      out << "force ";
      for (std::size_t i = 0; i < f.gamma.size(); ++i) out << (i ? ", " : "") << f.gamma[i].str();
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace nhdyn

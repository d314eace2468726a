#include "nhdyn/constraints.hpp"

namespace nhdyn {

namespace {

std::vector<Expression> parse4All(const std::vector<std::string>& texts,
                                  const std::shared_ptr<const SymbolTable>& table) {
  std::vector<Expression> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(Expression::parse(t, table));
  return out;
}

}  // namespace

NonholonomicProblem NonholonomicProblem::build(LagrangianModel model,
                                               std::vector<std::string> psiTexts,
                                               std::vector<std::vector<std::string>> directionTexts,
                                               bool chetaev,
                                               std::vector<std::vector<std::string>> forceTexts) {
  const auto table = model.table();
  const int n = model.n();

  std::vector<Expression> psi = parse4All(psiTexts, table);

  std::vector<CovectorField> directions;
  directions.reserve(directionTexts.size());
  for (const auto& row : directionTexts) {
    if (static_cast<int>(row.size()) != 2 * n)
      throw Error("direction covector needs " + std::to_string(2 * n) + " coefficients, got " +
                  std::to_string(row.size()));
    CovectorField cf;
    for (int i = 0; i < n; ++i) cf.gamma.push_back(Expression::parse(row[i], table));
    for (int i = 0; i < n; ++i) cf.beta.push_back(Expression::parse(row[n + i], table));
    directions.push_back(std::move(cf));
  }

  if (chetaev) {
    if (!forceTexts.empty()) throw Error("chetaev forces take no covector rows");
    return NonholonomicProblem(std::move(model), std::move(psi), std::move(directions),
                               ForceSpec::chetaev());
  }

  std::vector<CovectorField> covectors;
  covectors.reserve(forceTexts.size());
  for (const auto& row : forceTexts) {
    if (static_cast<int>(row.size()) != n)
      throw Error("force covector needs " + std::to_string(n) + " coefficients, got " +
                  std::to_string(row.size()));
    CovectorField cf;
    for (const auto& text : row) cf.gamma.push_back(Expression::parse(text, table));
    for (int i = 0; i < n; ++i) cf.beta.push_back(Expression::constant(0.0, table));
    covectors.push_back(std::move(cf));
  }
  return NonholonomicProblem(std::move(model), std::move(psi), std::move(directions),
                             ForceSpec::custom(std::move(covectors)));
}

NonholonomicProblem::NonholonomicProblem(LagrangianModel model, std::vector<Expression> psi,
                                         std::vector<CovectorField> directions, ForceSpec forces)
    : model_(std::move(model)),
      psi_(std::move(psi)),
      directions_(std::move(directions)),
      forces_(std::move(forces)) {
  const int n = model_.n();
  auto checkCovector = [&](const CovectorField& cf, const char* what) {
    if (static_cast<int>(cf.gamma.size()) != n || static_cast<int>(cf.beta.size()) != n)
      throw Error(std::string(what) + " covector has wrong arity");
  };
  for (const auto& d : directions_) checkCovector(d, "direction");

  if (!forces_.isChetaev()) {
    const int c = static_cast<int>(forces_.covectors().size());
    if (c != annihilatorSize()) throw DimensionMismatch(c, annihilatorSize());
    int index = 0;
    for (const auto& f : forces_.covectors()) {
      checkCovector(f, "force");
      for (const auto& beta : f.beta)
        if (!beta.isZeroLiteral()) throw NonHorizontalForce(index);
      ++index;
    }
  }

  dPsi_.reserve(psi_.size());
  for (const auto& p : psi_) {
    CovectorField grad;
    grad.gamma.reserve(n);
    grad.beta.reserve(n);
    for (int i = 0; i < n; ++i) {
      grad.gamma.push_back(p.diff(model_.coords()[i]));
      grad.beta.push_back(p.diff(model_.table()->velocityName(i)));
    }
    dPsi_.push_back(std::move(grad));
  }
}

int NonholonomicProblem::forceCount() const {
  return forces_.isChetaev() ? annihilatorSize()
                             : static_cast<int>(forces_.covectors().size());
}

Eigen::VectorXd NonholonomicProblem::psiValues(const State& s) const {
  Bindings b = model_.bind(s);
  Eigen::VectorXd values(r());
  for (int a = 0; a < r(); ++a) values[a] = psi_[a].eval(b);
  return values;
}

Eigen::MatrixXd NonholonomicProblem::annihilatorBasis(const State& s) const {
  const int n = model_.n();
  Bindings b = model_.bind(s);
  Eigen::MatrixXd rows(annihilatorSize(), 2 * n);
  int row = 0;
  for (const auto& grad : dPsi_) {
    for (int i = 0; i < n; ++i) {
      rows(row, i) = grad.gamma[i].eval(b);
      rows(row, n + i) = grad.beta[i].eval(b);
    }
    ++row;
  }
  for (const auto& d : directions_) {
    for (int i = 0; i < n; ++i) {
      rows(row, i) = d.gamma[i].eval(b);
      rows(row, n + i) = d.beta[i].eval(b);
    }
    ++row;
  }
  return rows;
}

Eigen::MatrixXd NonholonomicProblem::annihilatorBeta(const State& s) const {
  const int n = model_.n();
  return annihilatorBasis(s).rightCols(n);
}

Eigen::MatrixXd NonholonomicProblem::chetaevForces(const State& s) const {
  if (!forces_.isChetaev()) throw WrongForceMode("chetaev_forces requires Chetaev force mode");
  return annihilatorBeta(s);
}

Eigen::MatrixXd NonholonomicProblem::forceRows(const State& s) const {
  if (forces_.isChetaev()) return annihilatorBeta(s);
  const int n = model_.n();
  Bindings b = model_.bind(s);
  Eigen::MatrixXd rows(static_cast<int>(forces_.covectors().size()), n);
  for (int c = 0; c < rows.rows(); ++c)
    for (int i = 0; i < n; ++i) rows(c, i) = forces_.covectors()[c].gamma[i].eval(b);
  return rows;
}

AdmissibilityReport NonholonomicProblem::admissibility(const State& s) const {
  int rank = numericalRank(annihilatorBeta(s));
  return {rank == annihilatorSize(), rank};
}

int NonholonomicProblem::numericalRank(const Eigen::MatrixXd& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double threshold = kRankTolerance * sv(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > threshold) ++rank;
  return rank;
}

}  // namespace nhdyn

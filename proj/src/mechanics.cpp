#include "nhdyn/mechanics.hpp"

#include <cmath>

namespace nhdyn {

State::State(Eigen::VectorXd q, Eigen::VectorXd v) : q(std::move(q)), v(std::move(v)) {
  if (this->q.size() != this->v.size()) throw Error("state q and v dimensions differ");
}

bool State::allFinite() const { return q.allFinite() && v.allFinite(); }

LagrangianModel::LagrangianModel(std::vector<std::string> coords,
                                 std::vector<std::pair<std::string, double>> params,
                                 std::string_view lagrangian)
    : table_([&] {
        std::vector<std::string> paramNames;
        paramNames.reserve(params.size());
        for (const auto& [name, value] : params) paramNames.push_back(name);
        return std::make_shared<const SymbolTable>(std::move(coords), std::move(paramNames));
      }()),
      params_(std::move(params)),
      lagrangian_(Expression::parse(lagrangian, table_)) {
  for (const auto& [name, value] : params_)
    if (!std::isfinite(value)) throw InvalidParam("parameter '" + name + "' is not finite");

  const int n = table_->n();
  dLdq_.reserve(n);
  dLdv_.reserve(n);
  for (int i = 0; i < n; ++i) {
    dLdq_.push_back(lagrangian_.diff(table_->coords()[i]));
    dLdv_.push_back(lagrangian_.diff(table_->velocityName(i)));
  }
  hess_.resize(n);
  mixed_.resize(n);
  for (int i = 0; i < n; ++i) {
    hess_[i].reserve(n);
    mixed_[i].reserve(n);
    for (int j = 0; j < n; ++j) {
      hess_[i].push_back(dLdv_[i].diff(table_->velocityName(j)));
      mixed_[i].push_back(dLdv_[i].diff(table_->coords()[j]));
    }
  }
}

double LagrangianModel::param(const std::string& name) const {
  for (const auto& [pname, value] : params_)
    if (pname == name) return value;
  throw InvalidParam("unknown parameter '" + name + "'");
}

int LagrangianModel::coordIndex(const std::string& name) const {
  int idx = table_->coordIndexOf(name);
  if (idx < 0) throw UnknownVariable(name);
  return idx;
}

Bindings LagrangianModel::bind(const State& s) const {
  const int n = table_->n();
  if (s.q.size() != n || s.v.size() != n) throw Error("state dimension does not match model");
  std::vector<double> values(table_->slotCount());
  for (int i = 0; i < n; ++i) {
    values[i] = s.q[i];
    values[n + i] = s.v[i];
  }
  for (std::size_t k = 0; k < params_.size(); ++k) values[2 * n + k] = params_[k].second;
  return Bindings(table_, std::move(values));
}

Eigen::MatrixXd LagrangianModel::hessianAt(const Bindings& b) const {
  const int n = table_->n();
  Eigen::MatrixXd h(n, n);
  for (int i = 0; i < n; ++i) {
    h(i, i) = hess_[i][i].eval(b);
    for (int j = i + 1; j < n; ++j) {
      double value = hess_[i][j].eval(b);
      h(i, j) = value;
      h(j, i) = value;
    }
  }
  return h;
}

Eigen::MatrixXd LagrangianModel::hessian(const State& s) const { return hessianAt(bind(s)); }

Eigen::MatrixXd LagrangianModel::hessianInverse(const State& s, double* rcondOut) const {
  Eigen::MatrixXd h = hessian(s);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(h, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double rcond = sv(0) > 0.0 ? sv(sv.size() - 1) / sv(0) : 0.0;
  if (rcondOut) *rcondOut = rcond;
  if (!(rcond >= kHessianRcondFloor)) throw SingularHessian(rcond);
  return svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().transpose();
}

Eigen::VectorXd LagrangianModel::freeAcceleration(const State& s) const {
  const int n = table_->n();
  Bindings b = bind(s);
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) {
    double drift = 0.0;
    for (int j = 0; j < n; ++j) drift += mixed_[i][j].eval(b) * s.v[j];
    rhs[i] = dLdq_[i].eval(b) - drift;
  }
  return hessianInverse(s) * rhs;
}

double LagrangianModel::energy(const State& s) const {
  const int n = table_->n();
  Bindings b = bind(s);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += s.v[i] * dLdv_[i].eval(b);
  return sum - lagrangian_.eval(b);
}

Eigen::VectorXd LagrangianModel::legendre(const State& s) const {
  const int n = table_->n();
  Bindings b = bind(s);
  Eigen::VectorXd p(n);
  for (int i = 0; i < n; ++i) p[i] = dLdv_[i].eval(b);
  return p;
}

SymplecticData LagrangianModel::symplecticData(const State& s) const {
  const int n = table_->n();
  Bindings b = bind(s);
  Eigen::MatrixXd h = hessianAt(b);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(h);
  const auto& sv = svd.singularValues();
  double rcond = sv(0) > 0.0 ? sv(sv.size() - 1) / sv(0) : 0.0;
  if (!(rcond >= kHessianRcondFloor)) throw SingularHessian(rcond);

  // A_ij = ∂²L/∂q_i∂v_j - ∂²L/∂q_j∂v_i ; mixed_[i][j] = ∂²L/∂q_j∂v_i.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double value = mixed_[j][i].eval(b) - mixed_[i][j].eval(b);
      a(i, j) = value;
      a(j, i) = -value;
    }

  SymplecticData data;
  data.omega = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  data.omega.topLeftCorner(n, n) = a;
  data.omega.topRightCorner(n, n) = h;
  data.omega.bottomLeftCorner(n, n) = -h;
  data.lambda = data.omega.partialPivLu().inverse();
  return data;
}

}  // namespace nhdyn

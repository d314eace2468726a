#pragma once

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "nhdyn/expr.hpp"

namespace nhdyn {

/// A point of TQ in the global chart: configuration q and velocity v.
struct State {
  Eigen::VectorXd q;
  Eigen::VectorXd v;

  State() = default;
  State(Eigen::VectorXd q, Eigen::VectorXd v);
  bool allFinite() const;
};

/// Cartan 2-form and its inverse at one state, in the (∂/∂q, ∂/∂v) basis.
struct SymplecticData {
  Eigen::MatrixXd omega;   // 2n x 2n, antisymmetric, dv∧dv block zero
  Eigen::MatrixXd lambda;  // omega^{-1}

  /// The W^{ij} pairing block of lambda (equals hessian^{-1}).
  Eigen::MatrixXd wBlock() const {
    const auto n = omega.rows() / 2;
    return lambda.block(n, 0, n, n);
  }
};

/// A regular Lagrangian on one coordinate chart. Immutable after
/// construction; all queries are pure per state.
class LagrangianModel {
 public:
  /// Hessian reciprocal condition numbers below this raise SingularHessian.
  static constexpr double kHessianRcondFloor = 1e-12;

  LagrangianModel(std::vector<std::string> coords,
                  std::vector<std::pair<std::string, double>> params,
                  std::string_view lagrangian);

  int n() const { return table_->n(); }
  const std::vector<std::string>& coords() const { return table_->coords(); }
  const std::shared_ptr<const SymbolTable>& table() const { return table_; }
  const Expression& lagrangian() const { return lagrangian_; }
  const std::vector<std::pair<std::string, double>>& params() const { return params_; }
  double param(const std::string& name) const;
  int coordIndex(const std::string& name) const;

  Bindings bind(const State& s) const;

  /// H_ij = ∂²L/∂v_i∂v_j at s.
  Eigen::MatrixXd hessian(const State& s) const;

  /// H^{-1}; throws SingularHessian below the rcond floor. The reciprocal
  /// condition number is reported through `rcondOut` when non-null.
  Eigen::MatrixXd hessianInverse(const State& s, double* rcondOut = nullptr) const;

  /// Solution a of H a = ∂L/∂q - (∂²L/∂q∂v) v; the free Euler-Lagrange
  /// acceleration.
  Eigen::VectorXd freeAcceleration(const State& s) const;

  /// E_L = Σ v_i ∂L/∂v_i - L.
  double energy(const State& s) const;

  /// Momenta p_i = ∂L/∂v_i.
  Eigen::VectorXd legendre(const State& s) const;

  SymplecticData symplecticData(const State& s) const;

 private:
  Eigen::MatrixXd hessianAt(const Bindings& b) const;

  std::shared_ptr<const SymbolTable> table_;
  std::vector<std::pair<std::string, double>> params_;
  Expression lagrangian_;
  std::vector<Expression> dLdq_;
  std::vector<Expression> dLdv_;
  // hess_[i][j] = ∂²L/∂v_i∂v_j ; mixed_[i][j] = ∂²L/∂q_j∂v_i
  std::vector<std::vector<Expression>> hess_;
  std::vector<std::vector<Expression>> mixed_;
};

}  // namespace nhdyn

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "nhdyn/mechanics.hpp"

namespace nhdyn {

/// A 1-form field γ_i dq^i + β_i dv^i with expression coefficients.
struct CovectorField {
  std::vector<Expression> gamma;  // n dq coefficients
  std::vector<Expression> beta;   // n dv coefficients
};

/// Reaction-force bundle: Chetaev (F = S*(D⁰)) or an explicit list of
/// horizontal covectors.
class ForceSpec {
 public:
  static ForceSpec chetaev() { return ForceSpec(true, {}); }
  static ForceSpec custom(std::vector<CovectorField> covectors) {
    return ForceSpec(false, std::move(covectors));
  }

  bool isChetaev() const { return chetaev_; }
  const std::vector<CovectorField>& covectors() const { return covectors_; }

 private:
  ForceSpec(bool chetaev, std::vector<CovectorField> covectors)
      : chetaev_(chetaev), covectors_(std::move(covectors)) {}
  bool chetaev_;
  std::vector<CovectorField> covectors_;
};

struct AdmissibilityReport {
  bool admissible;
  int rank;
};

/// The quadruple (L, C, D, F): constraint functions Ψ^a cutting C, extra
/// direction covectors β^b completing D⁰ = (TC)⁰ ⊕ K, and the force bundle.
/// Validated at build; immutable afterwards; per-state queries are pure.
class NonholonomicProblem {
 public:
  /// Relative singular-value threshold for every rank decision.
  static constexpr double kRankTolerance = 1e-9;

  /// Texts are parsed against the model's tables. Each direction row holds
  /// 2n expressions (gamma then beta). Custom forces are given as rows of n
  /// dq-coefficient expressions; their dv parts are literal zero.
  static NonholonomicProblem build(LagrangianModel model, std::vector<std::string> psiTexts,
                                   std::vector<std::vector<std::string>> directionTexts,
                                   bool chetaev,
                                   std::vector<std::vector<std::string>> forceTexts = {});

  /// Build with explicit covector fields; custom force covectors must be
  /// horizontal (all beta coefficients the literal zero expression).
  NonholonomicProblem(LagrangianModel model, std::vector<Expression> psi,
                      std::vector<CovectorField> directions, ForceSpec forces);

  const LagrangianModel& model() const { return model_; }
  int r() const { return static_cast<int>(psi_.size()); }
  int s() const { return static_cast<int>(directions_.size()); }
  int annihilatorSize() const { return r() + s(); }
  int forceCount() const;
  bool unconstrained() const { return r() == 0 && s() == 0; }
  const std::vector<Expression>& psi() const { return psi_; }
  const std::vector<CovectorField>& directions() const { return directions_; }
  const ForceSpec& forces() const { return forces_; }

  /// Ψ^a(s), an r-vector.
  Eigen::VectorXd psiValues(const State& s) const;

  /// (r+s) x 2n matrix; rows are the evaluated D⁰ spanning set, dΨ^a first,
  /// then the direction covectors; columns are γ coefficients then β.
  Eigen::MatrixXd annihilatorBasis(const State& s) const;

  /// β coefficient block of annihilatorBasis: (r+s) x n.
  Eigen::MatrixXd annihilatorBeta(const State& s) const;

  /// S* image of the D⁰ basis, rows of dq coefficients. Chetaev mode only.
  Eigen::MatrixXd chetaevForces(const State& s) const;

  /// Force covector rows (dq coefficients), whichever mode: c x n.
  Eigen::MatrixXd forceRows(const State& s) const;

  /// Rank of the β block; admissible iff it equals r+s (S* injective on D⁰).
  AdmissibilityReport admissibility(const State& s) const;

  static int numericalRank(const Eigen::MatrixXd& m);

 private:
  LagrangianModel model_;
  std::vector<Expression> psi_;
  std::vector<CovectorField> directions_;
  ForceSpec forces_;
  // dPsi_[a]: gradients of Ψ^a split into dq / dv coefficient expressions.
  std::vector<CovectorField> dPsi_;
};

}  // namespace nhdyn

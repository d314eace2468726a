#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "nhdyn/expr.hpp"
#include "nhdyn/mechanics.hpp"

namespace nhdyn::testing {

/// Central finite difference of `f` at x, step h — the independent oracle for
/// every symbolic derivative in the suite.
inline double centralDiff(const std::function<double(double)>& f, double x, double h = 1e-6) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Central finite-difference derivative of an expression in one variable.
inline double fdDerivative(const Expression& e, const Bindings& at, int slot, double h = 1e-6) {
  Bindings plus = at, minus = at;
  plus.mutableValues()[slot] += h;
  minus.mutableValues()[slot] -= h;
  return (e.eval(plus) - e.eval(minus)) / (2.0 * h);
}

/// Second partial ∂²f/∂slotA∂slotB of an expression by nested central
/// differences (step 1e-4 balances truncation and roundoff for seconds).
inline double fdSecond(const Expression& e, const Bindings& at, int slotA, int slotB,
                       double h = 1e-4) {
  Bindings pp = at, pm = at, mp = at, mm = at;
  pp.mutableValues()[slotA] += h;
  pp.mutableValues()[slotB] += h;
  pm.mutableValues()[slotA] += h;
  pm.mutableValues()[slotB] -= h;
  mp.mutableValues()[slotA] -= h;
  mp.mutableValues()[slotB] += h;
  mm.mutableValues()[slotA] -= h;
  mm.mutableValues()[slotB] -= h;
  return (e.eval(pp) - e.eval(pm) - e.eval(mp) + e.eval(mm)) / (4.0 * h * h);
}

/// Random expression source text over the table's coordinates/velocities,
/// bounded depth, built from the full grammar with integer-constant
/// exponents. Deterministic in the generator state.
class RandomExprGen {
 public:
  RandomExprGen(std::shared_ptr<const SymbolTable> table, unsigned seed)
      : table_(std::move(table)), rng_(seed) {}

  std::string source(int maxDepth) { return gen(maxDepth); }

  Expression expression(int maxDepth) {
    return Expression::parse(gen(maxDepth), table_);
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::string gen(int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
    switch (pick(rng_)) {
      case 0: {  // constant
        std::uniform_real_distribution<double> c(-2.0, 2.0);
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6f", c(rng_));
        return buf;
      }
      case 1: {  // variable (coordinate or velocity)
        std::uniform_int_distribution<int> v(0, 2 * table_->n() - 1);
        int slot = v(rng_);
        return slot < table_->n() ? table_->coords()[slot]
                                  : table_->velocityName(slot - table_->n());
      }
      case 2:
        return "(" + gen(depth - 1) + " + " + gen(depth - 1) + ")";
      case 3:
        return "(" + gen(depth - 1) + " - " + gen(depth - 1) + ")";
      case 4:
        return "(" + gen(depth - 1) + ")*(" + gen(depth - 1) + ")";
      case 5:
        return "sin(" + gen(depth - 1) + ")";
      case 6:
        return "cos(" + gen(depth - 1) + ")";
      case 7:
        return "exp(" + gen(depth - 1) + ")";
      case 8: {  // small integer power
        std::uniform_int_distribution<int> p(2, 3);
        return "(" + gen(depth - 1) + ")^" + std::to_string(p(rng_));
      }
      case 9:
        return "-(" + gen(depth - 1) + ")";
    }
    return "0";
  }

  std::shared_ptr<const SymbolTable> table_;
  std::mt19937_64 rng_;
};

/// Bindings with every slot uniform in [-2, 2].
inline Bindings randomBindings(const std::shared_ptr<const SymbolTable>& table,
                               std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> values(table->slotCount());
  for (auto& v : values) v = u(rng);
  return Bindings(table, values);
}

/// True when the expression (and, implicitly, its FD stencils nearby) stays
/// finite and moderate at the bindings; keeps finite-difference comparisons
/// well conditioned.
inline bool tameAt(const Expression& e, const Bindings& b, double cap = 1e4) {
  try {
    double v = e.eval(b);
    return std::isfinite(v) && std::abs(v) <= cap;
  } catch (const Error&) {
    return false;
  }
}

inline State randomState(int n, std::mt19937_64& rng, double span = 1.0) {
  std::uniform_real_distribution<double> u(-span, span);
  State s{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (int i = 0; i < n; ++i) {
    s.q[i] = u(rng);
    s.v[i] = u(rng);
  }
  return s;
}

}  // namespace nhdyn::testing

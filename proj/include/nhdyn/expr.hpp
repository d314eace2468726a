#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "nhdyn/errors.hpp"

namespace nhdyn {

enum class VarKind { Coordinate, Velocity, Parameter };

/// Name tables of one model: n coordinates, their "d"-prefixed velocities and
/// the named parameters. Names share a single namespace; collisions (including
/// a name that equals the velocity of another coordinate) are rejected.
///
/// Slot layout: coordinates [0,n), velocities [n,2n), parameters [2n,2n+p).
class SymbolTable {
 public:
  SymbolTable(std::vector<std::string> coords, std::vector<std::string> params);

  int n() const { return static_cast<int>(coords_.size()); }
  const std::vector<std::string>& coords() const { return coords_; }
  const std::vector<std::string>& params() const { return params_; }
  std::size_t slotCount() const { return 2 * coords_.size() + params_.size(); }

  /// Slot for `name`, or -1 when the name is unknown.
  int findSlot(std::string_view name) const;
  /// Slot for `name`; throws UnknownVariable.
  int requireSlot(std::string_view name) const;

  VarKind kindOf(int slot) const;
  const std::string& slotName(int slot) const;
  std::string velocityName(int coordIndex) const { return "d" + coords_[coordIndex]; }
  int coordIndexOf(std::string_view name) const;  // -1 if not a coordinate

 private:
  std::vector<std::string> coords_;
  std::vector<std::string> params_;
  std::vector<std::string> velocityNames_;
  std::map<std::string, int, std::less<>> slots_;
};

/// A complete set of values for every slot of a SymbolTable. Construction
/// fails rather than defaulting a missing name.
class Bindings {
 public:
  Bindings(std::shared_ptr<const SymbolTable> table, std::vector<double> values);
  static Bindings fromMap(std::shared_ptr<const SymbolTable> table,
                          const std::map<std::string, double>& values);

  double operator[](std::size_t slot) const { return values_[slot]; }
  const SymbolTable& table() const { return *table_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& mutableValues() { return values_; }

 private:
  std::shared_ptr<const SymbolTable> table_;
  std::vector<double> values_;
};

enum class UnaryOp { Neg, Sin, Cos, Tan, Exp, Log, Sqrt };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

/// Immutable scalar expression over the coordinates, velocities and
/// parameters of one SymbolTable. Supports evaluation and exact symbolic
/// partial differentiation; the only rewriting ever applied is constant
/// folding of literal zeros and ones.
class Expression {
 public:
  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

  /// Parse `text` against `table`. Grammar: `^` binds tighter than `*`/`/`,
  /// which bind tighter than `+`/`-`; `^` is right-associative, unary minus
  /// allowed; functions sin, cos, tan, exp, log, sqrt.
  static Expression parse(std::string_view text, std::shared_ptr<const SymbolTable> table);
  static Expression constant(double value, std::shared_ptr<const SymbolTable> table);

  double eval(const Bindings& bindings) const;

  /// Exact partial derivative with respect to a declared coordinate or
  /// velocity name.
  Expression diff(std::string_view var) const;

  /// Canonical textual form; parse(str()) reproduces the tree exactly.
  std::string str() const;

  bool isZeroLiteral() const;
  bool structurallyEqual(const Expression& other) const;
  std::vector<std::string> variableNames() const;

  const std::shared_ptr<const SymbolTable>& tablePtr() const { return table_; }
  const SymbolTable& table() const { return *table_; }
  const NodePtr& root() const { return root_; }

 private:
  Expression(NodePtr root, std::shared_ptr<const SymbolTable> table);

  NodePtr root_;
  std::shared_ptr<const SymbolTable> table_;
};

struct Expression::Node {
  enum class Kind { Constant, Variable, Unary, Binary };
  Kind kind;
  double value = 0.0;            // Constant
  int slot = -1;                 // Variable
  VarKind varKind = VarKind::Coordinate;
  UnaryOp uop = UnaryOp::Neg;    // Unary
  BinaryOp bop = BinaryOp::Add;  // Binary
  NodePtr a;                     // Unary child / Binary left
  NodePtr b;                     // Binary right
};

}  // namespace nhdyn

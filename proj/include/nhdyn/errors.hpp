#pragma once

#include <stdexcept>
#include <string>

namespace nhdyn {

/// Base class of every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised by the expression parser; `position` is a byte offset into the
/// source text.
struct SyntaxError : Error {
  SyntaxError(std::size_t position, const std::string& message)
      : Error("syntax error at position " + std::to_string(position) + ": " + message),
        position(position) {}
  std::size_t position;
};

/// A binding set does not cover a variable required for evaluation.
struct UnboundVariable : Error {
  explicit UnboundVariable(std::string name)
      : Error("unbound variable '" + name + "'"), name(std::move(name)) {}
  std::string name;
};

/// Differentiation against a name that is not a declared coordinate or
/// velocity.
struct UnknownVariable : Error {
  explicit UnknownVariable(std::string name)
      : Error("unknown variable '" + name + "'"), name(std::move(name)) {}
  std::string name;
};

/// log/sqrt of a negative argument.
struct DomainError : Error {
  using Error::Error;
};

struct SingularHessian : Error {
  explicit SingularHessian(double rcond)
      : Error("singular Lagrangian Hessian (rcond " + std::to_string(rcond) + ")"),
        rcond(rcond) {}
  double rcond;
};

/// Custom force bundle has the wrong number of covectors.
struct DimensionMismatch : Error {
  DimensionMismatch(int actual, int expected)
      : Error("force bundle has " + std::to_string(actual) + " covectors, expected " +
              std::to_string(expected)),
        actual(actual),
        expected(expected) {}
  int actual;
  int expected;
};

/// A custom force covector carries nonzero dv coefficients.
struct NonHorizontalForce : Error {
  explicit NonHorizontalForce(int index)
      : Error("force covector " + std::to_string(index) + " is not horizontal"),
        index(index) {}
  int index;
};

/// Chetaev-only operation invoked on a problem with custom forces.
struct WrongForceMode : Error {
  using Error::Error;
};

struct UnknownScenario : Error {
  explicit UnknownScenario(const std::string& name) : Error("unknown scenario '" + name + "'") {}
};

struct InvalidParam : Error {
  using Error::Error;
};

struct NoClosedForm : Error {
  explicit NoClosedForm(const std::string& name)
      : Error("scenario '" + name + "' has no closed-form oracle") {}
};

/// An RK4 stage could not be evaluated; `time` is attached by simulate().
struct StageFailure : Error {
  StageFailure(int stage, std::string classification, double time = -1.0)
      : Error("stage " + std::to_string(stage) + " " + classification +
              (time >= 0.0 ? " at t=" + std::to_string(time) : "")),
        stage(stage),
        classification(std::move(classification)),
        time(time) {}
  int stage;
  std::string classification;
  double time;
};

struct NonFiniteState : Error {
  NonFiniteState() : Error("state contains a non-finite entry") {}
};

struct ProjectionFailed : Error {
  explicit ProjectionFailed(double residual, double time = -1.0)
      : Error("constraint projection did not converge (residual " + std::to_string(residual) +
              (time >= 0.0 ? ", t=" + std::to_string(time) : "") + ")"),
        residual(residual),
        time(time) {}
  double residual;
  double time;
};

/// The dΨ/∂v rows are rank deficient; velocities cannot be projected.
struct NotProjectable : Error {
  NotProjectable() : Error("constraint velocity Jacobian is rank deficient") {}
};

struct OffConstraintState : Error {
  explicit OffConstraintState(double residual)
      : Error("initial state violates the constraints (max |psi| = " + std::to_string(residual) +
              "); pass project=true to start on C"),
        residual(residual) {}
  double residual;
};

struct FileError : Error {
  using Error::Error;
};

/// Problem-file parse failure; `line` is 1-based.
struct SectionError : Error {
  SectionError(int line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line(line) {}
  int line;
};

}  // namespace nhdyn

#pragma once

#include <stdexcept>
#include <string>

namespace qdr {

/// Base class of every failure raised by the engine.
struct EngineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Incompatible field counts, degenerate metrics, undeclared parameters.
struct SetupError : EngineError {
  using EngineError::EngineError;
};

/// A term of dilaton weight one blocks inversion of (D - 1).
struct WeightOneObstruction : EngineError {
  using EngineError::EngineError;
};

/// The argument of the antiderivative is not a total x-derivative.
struct NotExact : EngineError {
  using EngineError::EngineError;
};

/// Division by hbar hit a term without an hbar factor.
struct NotDivisible : EngineError {
  using EngineError::EngineError;
};

/// An odd power of the square root of hbar survived an expansion
/// that must only produce even ones.
struct OddLambdaResidue : EngineError {
  using EngineError::EngineError;
};

/// Malformed textual or structured input.
struct ParseError : EngineError {
  using EngineError::EngineError;
};

}  // namespace qdr

#pragma once

#include <stdexcept>
#include <string>

namespace indlim {

/// Base class of every error this library throws on purpose.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DivisionByZero : Error {
  explicit DivisionByZero(const std::string& what = "division by zero") : Error(what) {}
};

/// The requested ambient index cannot hold the given element.
struct AmbientTooSmall : Error {
  explicit AmbientTooSmall(const std::string& what) : Error(what) {}
};

struct IndexOutOfRange : Error {
  explicit IndexOutOfRange(const std::string& what) : Error(what) {}
};

/// Two limit elements belong to different directed systems.
struct SystemMismatch : Error {
  explicit SystemMismatch(const std::string& what) : Error(what) {}
};

struct ConeConditionViolated : Error {
  explicit ConeConditionViolated(const std::string& what) : Error(what) {}
};

struct Singular : Error {
  explicit Singular(const std::string& what) : Error(what) {}
};

struct NumericallySingular : Error {
  explicit NumericallySingular(const std::string& what) : Error(what) {}
};

struct OutsideChartDomain : Error {
  explicit OutsideChartDomain(const std::string& what) : Error(what) {}
};

/// Argument is not orthogonal to the chart pole.
struct NotInPerp : Error {
  explicit NotInPerp(const std::string& what) : Error(what) {}
};

struct LevelDecrease : Error {
  explicit LevelDecrease(const std::string& what) : Error(what) {}
};

struct EvaluationFailure : Error {
  explicit EvaluationFailure(const std::string& what) : Error(what) {}
};

struct UnknownSuite : Error {
  explicit UnknownSuite(const std::string& what) : Error(what) {}
};

struct UnknownTower : Error {
  explicit UnknownTower(const std::string& what) : Error(what) {}
};

struct ConfigInvalid : Error {
  explicit ConfigInvalid(const std::string& what) : Error(what) {}
};

}  // namespace indlim

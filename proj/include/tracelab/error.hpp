#pragma once

#include <stdexcept>
#include <string>

namespace tracelab {

enum class ErrorKind {
  NotPrime,
  TowerTooLarge,
  ZeroNorm,
  ZeroElement,
  TrivialAddChar,
  ZeroWeightRow,
  NotFixed,
  NotStable,
  NotAnOrbit,
  Singular,
  StrataMismatch,
  NotRegularSemisimple,
  RankUnsupported,
  NotCentral,
  BudgetExceeded,
  Config,
  Overflow,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::TowerTooLarge: return "TowerTooLarge";
    case ErrorKind::ZeroNorm: return "ZeroNorm";
    case ErrorKind::ZeroElement: return "ZeroElement";
    case ErrorKind::TrivialAddChar: return "TrivialAddChar";
    case ErrorKind::ZeroWeightRow: return "ZeroWeightRow";
    case ErrorKind::NotFixed: return "NotFixed";
    case ErrorKind::NotStable: return "NotStable";
    case ErrorKind::NotAnOrbit: return "NotAnOrbit";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::StrataMismatch: return "StrataMismatch";
    case ErrorKind::NotRegularSemisimple: return "NotRegularSemisimple";
    case ErrorKind::RankUnsupported: return "RankUnsupported";
    case ErrorKind::NotCentral: return "NotCentral";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::Overflow: return "Overflow";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace tracelab

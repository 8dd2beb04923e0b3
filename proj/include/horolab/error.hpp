#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace horolab {

/// Machine-readable failure categories. The CLI serializes these as the
/// "error" field of its error JSON.
enum class ErrorKind {
  UndefinedValuation,
  ExpansionAtPole,
  SingularPoint,
  NonIntegralDerivation,
  PairingMismatch,
  NoData,
  PolynomialInput,
  OverConstrained,
  DataError,
  TrivialInput,
  InsufficientTruncation,
  BoundTooSmall,
  InconclusiveSearch,
  IncompleteHypotheses,
  Singularity,
  RTooSmall,
  PathError,
  StiffnessError,
  SymbolicDomain,
  SyntaxError,
  InvalidArgument,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::UndefinedValuation: return "undefined-valuation";
    case ErrorKind::ExpansionAtPole: return "expansion-at-pole";
    case ErrorKind::SingularPoint: return "singular-point";
    case ErrorKind::NonIntegralDerivation: return "non-integral-derivation";
    case ErrorKind::PairingMismatch: return "pairing-mismatch";
    case ErrorKind::NoData: return "no-data";
    case ErrorKind::PolynomialInput: return "polynomial-input";
    case ErrorKind::OverConstrained: return "over-constrained";
    case ErrorKind::DataError: return "data-error";
    case ErrorKind::TrivialInput: return "trivial-input";
    case ErrorKind::InsufficientTruncation: return "insufficient-truncation";
    case ErrorKind::BoundTooSmall: return "bound-too-small";
    case ErrorKind::InconclusiveSearch: return "inconclusive-search";
    case ErrorKind::IncompleteHypotheses: return "incomplete-hypotheses";
    case ErrorKind::Singularity: return "singularity";
    case ErrorKind::RTooSmall: return "r-too-small";
    case ErrorKind::PathError: return "path-error";
    case ErrorKind::StiffnessError: return "stiffness-error";
    case ErrorKind::SymbolicDomain: return "symbolic-domain";
    case ErrorKind::SyntaxError: return "syntax-error";
    case ErrorKind::InvalidArgument: return "invalid-argument";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace horolab

#pragma once

#include <stdexcept>
#include <string>

namespace qch {

enum class ErrorKind {
  DimensionMismatch,
  ZeroSpan,
  UnnormalizedState,
  NotADecomposition,
  NotOrthogonal,
  ZeroElement,
  DegenerateProjector,
  IncompatibleFrameworks,
  MeaninglessCombination,
  IncompatibleProjectors,
  ZeroCondition,
  BadFactorization,
  InvalidEnsemble,
  NumericalInstability,
  TimeMismatch,
  FamilyTooLarge,
  InconsistentFamily,
  NonpositiveTime,
  NonpositiveDiffusion,
  ConstructionFailed,
  ParseError,
  UnknownName,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ZeroSpan: return "ZeroSpan";
    case ErrorKind::UnnormalizedState: return "UnnormalizedState";
    case ErrorKind::NotADecomposition: return "NotADecomposition";
    case ErrorKind::NotOrthogonal: return "NotOrthogonal";
    case ErrorKind::ZeroElement: return "ZeroElement";
    case ErrorKind::DegenerateProjector: return "DegenerateProjector";
    case ErrorKind::IncompatibleFrameworks: return "IncompatibleFrameworks";
    case ErrorKind::MeaninglessCombination: return "MeaninglessCombination";
    case ErrorKind::IncompatibleProjectors: return "IncompatibleProjectors";
    case ErrorKind::ZeroCondition: return "ZeroCondition";
    case ErrorKind::BadFactorization: return "BadFactorization";
    case ErrorKind::InvalidEnsemble: return "InvalidEnsemble";
    case ErrorKind::NumericalInstability: return "NumericalInstability";
    case ErrorKind::TimeMismatch: return "TimeMismatch";
    case ErrorKind::FamilyTooLarge: return "FamilyTooLarge";
    case ErrorKind::InconsistentFamily: return "InconsistentFamily";
    case ErrorKind::NonpositiveTime: return "NonpositiveTime";
    case ErrorKind::NonpositiveDiffusion: return "NonpositiveDiffusion";
    case ErrorKind::ConstructionFailed: return "ConstructionFailed";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnknownName: return "UnknownName";
  }
  return "UnknownErrorKind";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define QCH_DEFINE_ERROR(Name)                                              \
  class Name : public Error {                                               \
   public:                                                                  \
    explicit Name(const std::string& what) : Error(ErrorKind::Name, what) {} \
  }

QCH_DEFINE_ERROR(DimensionMismatch);
QCH_DEFINE_ERROR(ZeroSpan);
QCH_DEFINE_ERROR(UnnormalizedState);
QCH_DEFINE_ERROR(NotADecomposition);
QCH_DEFINE_ERROR(NotOrthogonal);
QCH_DEFINE_ERROR(ZeroElement);
QCH_DEFINE_ERROR(DegenerateProjector);
QCH_DEFINE_ERROR(IncompatibleFrameworks);
QCH_DEFINE_ERROR(IncompatibleProjectors);
QCH_DEFINE_ERROR(ZeroCondition);
QCH_DEFINE_ERROR(BadFactorization);
QCH_DEFINE_ERROR(InvalidEnsemble);
QCH_DEFINE_ERROR(NumericalInstability);
QCH_DEFINE_ERROR(TimeMismatch);
QCH_DEFINE_ERROR(FamilyTooLarge);
QCH_DEFINE_ERROR(InconsistentFamily);
QCH_DEFINE_ERROR(NonpositiveTime);
QCH_DEFINE_ERROR(NonpositiveDiffusion);
QCH_DEFINE_ERROR(ConstructionFailed);

#undef QCH_DEFINE_ERROR

/// Raised when two events live in frameworks that admit no common refinement.
/// Distinct from the numeric error kinds so callers can assert the single
/// framework rule specifically; the combination is undefined, not false.
class MeaninglessCombination : public Error {
 public:
  explicit MeaninglessCombination(const std::string& what)
      : Error(ErrorKind::MeaninglessCombination, what) {}
};

/// Parse failure with a position. Line/column are 1-based; either may be 0
/// when the failure is structural (schema level) rather than textual, in
/// which case `context` carries a JSON-path style location.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column, std::string context = {})
      : Error(ErrorKind::ParseError, what + locate(line, column, context)),
        line_(line), column_(column), context_(std::move(context)) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& context() const noexcept { return context_; }

 private:
  static std::string locate(int line, int column, const std::string& context) {
    std::string s;
    if (line > 0) s += " at line " + std::to_string(line) + ", column " + std::to_string(column);
    if (!context.empty()) s += " (" + context + ")";
    return s;
  }
  int line_;
  int column_;
  std::string context_;
};

class UnknownName : public Error {
 public:
  UnknownName(const std::string& name, const std::string& where)
      : Error(ErrorKind::UnknownName, "'" + name + "' is not defined (" + where + ")"),
        name_(name), where_(where) {}

  const std::string& name() const noexcept { return name_; }
  const std::string& where() const noexcept { return where_; }

 private:
  std::string name_;
  std::string where_;
};

}  // namespace qch

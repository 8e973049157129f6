#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace rowdil {

enum class ErrorKind {
  DimensionMismatch,
  NotContractive,
  NoConvergence,
  NotUnitary,
  BadWord,
  NotUnit,
  SearchFailed,
  IncompleteFamily,
  BlockingFailure,
  Inconsistent,
  AmbiguousIntertwinerSpace,
  Undecided,
  NotApplicable,
  NotStrictlyContractive,
  NoIsometricSolution,
  MixedNotConvergent,
  NotIrreducible,
  MalformedInput,
};

inline const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotContractive: return "NotContractive";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::BadWord: return "BadWord";
    case ErrorKind::NotUnit: return "NotUnit";
    case ErrorKind::SearchFailed: return "SearchFailed";
    case ErrorKind::IncompleteFamily: return "IncompleteFamily";
    case ErrorKind::BlockingFailure: return "BlockingFailure";
    case ErrorKind::Inconsistent: return "Inconsistent";
    case ErrorKind::AmbiguousIntertwinerSpace: return "AmbiguousIntertwinerSpace";
    case ErrorKind::Undecided: return "Undecided";
    case ErrorKind::NotApplicable: return "NotApplicable";
    case ErrorKind::NotStrictlyContractive: return "NotStrictlyContractive";
    case ErrorKind::NoIsometricSolution: return "NoIsometricSolution";
    case ErrorKind::MixedNotConvergent: return "MixedNotConvergent";
    case ErrorKind::NotIrreducible: return "NotIrreducible";
    case ErrorKind::MalformedInput: return "MalformedInput";
  }
  return "Unknown";
}

inline std::string num(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(kind_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace rowdil

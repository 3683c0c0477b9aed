#pragma once

#include <stdexcept>
#include <string>

namespace grafting {

// Failure conditions surfaced by the geometry layers.  The CLI maps these to
// process exit codes: ConfigError -> 2, BudgetExceeded -> 3, everything else -> 1.
enum class ErrorCode {
  IntersectingOrAsymptotic,  // no common perpendicular exists
  NoSolution,                // equidistant point does not exist / degenerate input
  InvalidRegion,             // trapezium perpendiculars exit the strip before reaching l
  PartialSupport,            // deflation requires every curve weighted
  DegenerateSpine,           // FigureEight spine (measure-zero wall) rejected
  InconsistentGluing,        // flat identification cycles fail to close
  InconsistentWidths,        // seed arc widths violate the pants linear relations
  BudgetExceeded,            // net node budget blown
  ConfigError,               // malformed experiment configuration
  ContractViolation,         // a numeric postcondition failed at runtime
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::IntersectingOrAsymptotic: return "IntersectingOrAsymptotic";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::InvalidRegion: return "InvalidRegion";
    case ErrorCode::PartialSupport: return "PartialSupport";
    case ErrorCode::DegenerateSpine: return "DegenerateSpine";
    case ErrorCode::InconsistentGluing: return "InconsistentGluing";
    case ErrorCode::InconsistentWidths: return "InconsistentWidths";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::ContractViolation: return "ContractViolation";
  }
  return "Unknown";
}

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, std::string(error_name(code)) + ": " + msg);
}

}  // namespace grafting

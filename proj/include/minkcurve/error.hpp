#pragma once

#include <stdexcept>
#include <string>

namespace minkcurve {

// Every failure mode the library reports, named after the condition that
// triggered it. The CLI maps these onto exit codes.
enum class ErrorCode {
  ParseError,
  UnknownFunction,
  DomainError,
  NonSmooth,
  PreconditionViolation,
  DegenerateInput,
  DerivativeUnavailable,
  DegenerateVelocity,
  NotSpacelike,
  NonRegular,
  ZeroCurvatureVector,
  NonIsolatedZero,
  OrderAmbiguous,
  MixedCausality,
  NotTypeL,
  GapTooWide,
  NearLightlike,
  StepTooLarge,
  InvalidData,
  NotAFrame,
  Singular,
  IoError,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownFunction: return "UnknownFunction";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NonSmooth: return "NonSmooth";
    case ErrorCode::PreconditionViolation: return "PreconditionViolation";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::DerivativeUnavailable: return "DerivativeUnavailable";
    case ErrorCode::DegenerateVelocity: return "DegenerateVelocity";
    case ErrorCode::NotSpacelike: return "NotSpacelike";
    case ErrorCode::NonRegular: return "NonRegular";
    case ErrorCode::ZeroCurvatureVector: return "ZeroCurvatureVector";
    case ErrorCode::NonIsolatedZero: return "NonIsolatedZero";
    case ErrorCode::OrderAmbiguous: return "OrderAmbiguous";
    case ErrorCode::MixedCausality: return "MixedCausality";
    case ErrorCode::NotTypeL: return "NotTypeL";
    case ErrorCode::GapTooWide: return "GapTooWide";
    case ErrorCode::NearLightlike: return "NearLightlike";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::InvalidData: return "InvalidData";
    case ErrorCode::NotAFrame: return "NotAFrame";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, long offset = -1)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code),
        offset_(offset) {}

  ErrorCode code() const noexcept { return code_; }

  // Byte offset into the input for parse diagnostics; -1 when not applicable.
  long offset() const noexcept { return offset_; }

 private:
  ErrorCode code_;
  long offset_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message, long offset = -1) {
  throw Error(code, message, offset);
}

}  // namespace minkcurve

// Error type shared by every module. The code names the failure class;
// the message carries the human-readable detail.
#pragma once

#include <stdexcept>
#include <string>

namespace plfocal {

enum class ErrorCode {
  NotInGroup,
  IndependenceViolation,
  DimensionMismatch,
  DegenerateSlope,
  ParseError,
  ModelMismatch,
  OutOfDomain,
  InvalidMap,
  HypothesisFailed,
  NoWitness,
  NotInFPlus,
  SlopeNotInGroup,
  NonRationalSlope,
  NonTotalOrder,
  EmbeddingOutOfRange,
  NonDyadicMap,
  NoCommonTail,
  EmptyBelow,
  WindowTooSmall,
  InvalidWordPair,
  EngineUndefined,
  NoFixedPoint,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NotInGroup: return "NotInGroup";
    case ErrorCode::IndependenceViolation: return "IndependenceViolation";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DegenerateSlope: return "DegenerateSlope";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ModelMismatch: return "ModelMismatch";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::InvalidMap: return "InvalidMap";
    case ErrorCode::HypothesisFailed: return "HypothesisFailed";
    case ErrorCode::NoWitness: return "NoWitness";
    case ErrorCode::NotInFPlus: return "NotInFPlus";
    case ErrorCode::SlopeNotInGroup: return "SlopeNotInGroup";
    case ErrorCode::NonRationalSlope: return "NonRationalSlope";
    case ErrorCode::NonTotalOrder: return "NonTotalOrder";
    case ErrorCode::EmbeddingOutOfRange: return "EmbeddingOutOfRange";
    case ErrorCode::NonDyadicMap: return "NonDyadicMap";
    case ErrorCode::NoCommonTail: return "NoCommonTail";
    case ErrorCode::EmptyBelow: return "EmptyBelow";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::InvalidWordPair: return "InvalidWordPair";
    case ErrorCode::EngineUndefined: return "EngineUndefined";
    case ErrorCode::NoFixedPoint: return "NoFixedPoint";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace plfocal

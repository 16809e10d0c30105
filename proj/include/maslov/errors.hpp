#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace maslov {

enum class ErrorCode {
  NotSymmetric,
  NoConvergence,
  NotOrthonormal,
  Singular,
  NotPositiveDefinite,
  RankDeficient,
  NotSelfAdjoint,
  DecompositionInconsistent,
  StepTooCoarse,
  GridTooCoarse,
  NotUnitary,
  RefinementExhausted,
  DegenerateFrame,
  HomotopyCheckFailed,
  EigenvalueOnPath,
  EmptyBottomShelf,
  MeshSensitivity,
  SyntaxError,
  ValidationError,
  IoError,
};

constexpr std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotOrthonormal: return "NotOrthonormal";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::NotSelfAdjoint: return "NotSelfAdjoint";
    case ErrorCode::DecompositionInconsistent: return "DecompositionInconsistent";
    case ErrorCode::StepTooCoarse: return "StepTooCoarse";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::RefinementExhausted: return "RefinementExhausted";
    case ErrorCode::DegenerateFrame: return "DegenerateFrame";
    case ErrorCode::HomotopyCheckFailed: return "HomotopyCheckFailed";
    case ErrorCode::EigenvalueOnPath: return "EigenvalueOnPath";
    case ErrorCode::EmptyBottomShelf: return "EmptyBottomShelf";
    case ErrorCode::MeshSensitivity: return "MeshSensitivity";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library. `code()` identifies the condition.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

/// Parse failure in a potential expression.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, std::vector<std::string> expected, const std::string& message)
      : Error(ErrorCode::SyntaxError, message + " at offset " + std::to_string(offset)),
        offset_(offset),
        expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

}  // namespace maslov

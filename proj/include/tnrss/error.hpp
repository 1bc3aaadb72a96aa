#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tnrss {

enum class ErrorCode {
  InvertZero,
  InvalidThreshold,
  InvalidParams,
  BadSubset,
  Malformed,
  DuplicateBlock,
  BlockTooLarge,
  TooManyBlocks,
  AdmNotSubset,
  DidReplayed,
  InvalidMod,
  BadSignature,
  DuplicateRedactor,
  CombineFailed,
  Io,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvertZero: return "InvertZero";
    case ErrorCode::InvalidThreshold: return "InvalidThreshold";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::BadSubset: return "BadSubset";
    case ErrorCode::Malformed: return "Malformed";
    case ErrorCode::DuplicateBlock: return "DuplicateBlock";
    case ErrorCode::BlockTooLarge: return "BlockTooLarge";
    case ErrorCode::TooManyBlocks: return "TooManyBlocks";
    case ErrorCode::AdmNotSubset: return "AdmNotSubset";
    case ErrorCode::DidReplayed: return "DidReplayed";
    case ErrorCode::InvalidMod: return "InvalidMod";
    case ErrorCode::BadSignature: return "BadSignature";
    case ErrorCode::DuplicateRedactor: return "DuplicateRedactor";
    case ErrorCode::CombineFailed: return "CombineFailed";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tnrss

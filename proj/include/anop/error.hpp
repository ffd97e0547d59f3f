#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace anop {

/// Failure codes shared by every module. The CLI reports them verbatim in
/// the diagnostics list.
enum class ErrorCode {
  Malformed,
  NotAn,
  NegativeValue,
  WrongKind,
  NotInjective,
  AlphaZero,
  NotHermitian,
  NoConvergence,
  NotPsd,
  DimTooSmall,
  ShapeMismatch,
  Singular,
  NotPartialIsometry,
  Parse,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace anop

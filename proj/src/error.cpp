#include "anop/error.hpp"

namespace anop {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Malformed: return "MALFORMED";
    case ErrorCode::NotAn: return "NOT_AN";
    case ErrorCode::NegativeValue: return "NEGATIVE_VALUE";
    case ErrorCode::WrongKind: return "WRONG_KIND";
    case ErrorCode::NotInjective: return "NOT_INJECTIVE";
    case ErrorCode::AlphaZero: return "ALPHA_ZERO";
    case ErrorCode::NotHermitian: return "NOT_HERMITIAN";
    case ErrorCode::NoConvergence: return "NO_CONVERGENCE";
    case ErrorCode::NotPsd: return "NOT_PSD";
    case ErrorCode::DimTooSmall: return "DIM_TOO_SMALL";
    case ErrorCode::ShapeMismatch: return "SHAPE_MISMATCH";
    case ErrorCode::Singular: return "SINGULAR";
    case ErrorCode::NotPartialIsometry: return "NOT_PARTIAL_ISOMETRY";
    case ErrorCode::Parse: return "PARSE";
  }
  return "UNKNOWN";
}

}  // namespace anop

#pragma once

// Data-parallel dense kernels. The OpenMP versions are used by the library;
// the serial versions under `reference` are kept as the test baseline and
// for the benchmark comparison.

#include <cstddef>

#include "anop/matrix.hpp"

namespace anop::kernels {

/// Work below this many multiply-adds runs on one thread.
inline constexpr std::size_t kParallelThreshold = 32 * 32 * 32;

/// c = a * b
void gemm(const Matrix& a, const Matrix& b, Matrix& c);
/// c = a* * b
void gemm_adjoint_left(const Matrix& a, const Matrix& b, Matrix& c);
double frobenius(const Matrix& a);
/// Frobenius norm of the strictly off-diagonal part of a square matrix.
double off_diagonal_frobenius(const Matrix& a);

namespace reference {

void gemm(const Matrix& a, const Matrix& b, Matrix& c);
void gemm_adjoint_left(const Matrix& a, const Matrix& b, Matrix& c);
double frobenius(const Matrix& a);
double off_diagonal_frobenius(const Matrix& a);

}  // namespace reference

}  // namespace anop::kernels

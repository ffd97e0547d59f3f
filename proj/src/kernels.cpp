#include "anop/kernels.hpp"

#include <cmath>

namespace anop::kernels {

namespace {

void check_product(const Matrix& a, std::size_t inner_b, const char* what) {
  if (a.cols() != inner_b) throw Error(ErrorCode::ShapeMismatch, what);
}

// out += s * row, with the complex product spelled out so it vectorizes
// (operator* carries the Annex G inf/nan recovery path).
inline void axpy_row(Complex s, const Complex* row, Complex* out, std::size_t m) {
  const double sr = s.real(), si = s.imag();
  const auto* x = reinterpret_cast<const double*>(row);
  auto* y = reinterpret_cast<double*>(out);
  for (std::size_t j = 0; j < m; ++j) {
    const double xr = x[2 * j], xi = x[2 * j + 1];
    y[2 * j] += sr * xr - si * xi;
    y[2 * j + 1] += sr * xi + si * xr;
  }
}

}  // namespace

void gemm(const Matrix& a, const Matrix& b, Matrix& c) {
  check_product(a, b.rows(), "gemm: inner dimensions differ");
  const std::size_t n = a.rows(), m = b.cols(), k = a.cols();
  c = Matrix(n, m);
  const auto rows = static_cast<std::ptrdiff_t>(n);
  // i-k-j order keeps the inner loop contiguous in b and c
#pragma omp parallel for schedule(static) if (n * m * k >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    const auto r = static_cast<std::size_t>(i);
    for (std::size_t p = 0; p < k; ++p) {
      const Complex aip = a(r, p);
      if (aip == Complex{}) continue;
      axpy_row(aip, &b(p, 0), &c(r, 0), m);
    }
  }
}

void gemm_adjoint_left(const Matrix& a, const Matrix& b, Matrix& c) {
  if (a.rows() != b.rows()) throw Error(ErrorCode::ShapeMismatch, "gemm_adjoint_left: row counts differ");
  const std::size_t n = a.cols(), m = b.cols(), k = a.rows();
  c = Matrix(n, m);
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) if (n * m * k >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    const auto r = static_cast<std::size_t>(i);
    for (std::size_t p = 0; p < k; ++p) {
      const Complex api = std::conj(a(p, r));
      if (api == Complex{}) continue;
      axpy_row(api, &b(p, 0), &c(r, 0), m);
    }
  }
}

double frobenius(const Matrix& a) {
  const auto d = a.data();
  const auto n = static_cast<std::ptrdiff_t>(d.size());
  double s = 0.0;
#pragma omp parallel for reduction(+ : s) schedule(static) if (d.size() >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) s += std::norm(d[static_cast<std::size_t>(i)]);
  return std::sqrt(s);
}

double off_diagonal_frobenius(const Matrix& a) {
  const auto n = static_cast<std::ptrdiff_t>(a.rows());
  double s = 0.0;
#pragma omp parallel for reduction(+ : s) schedule(static) if (a.rows() * a.cols() >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto r = static_cast<std::size_t>(i);
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j != r) s += std::norm(a(r, j));
    }
  }
  return std::sqrt(s);
}

namespace reference {

void gemm(const Matrix& a, const Matrix& b, Matrix& c) {
  check_product(a, b.rows(), "gemm: inner dimensions differ");
  c = Matrix(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Complex s{};
      for (std::size_t p = 0; p < a.cols(); ++p) s += a(i, p) * b(p, j);
      c(i, j) = s;
    }
  }
}

void gemm_adjoint_left(const Matrix& a, const Matrix& b, Matrix& c) {
  if (a.rows() != b.rows()) throw Error(ErrorCode::ShapeMismatch, "gemm_adjoint_left: row counts differ");
  c = Matrix(a.cols(), b.cols());
  for (std::size_t i = 0; i < a.cols(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Complex s{};
      for (std::size_t p = 0; p < a.rows(); ++p) s += std::conj(a(p, i)) * b(p, j);
      c(i, j) = s;
    }
  }
}

double frobenius(const Matrix& a) {
  double s = 0.0;
  for (const auto& z : a.data()) s += std::norm(z);
  return std::sqrt(s);
}

double off_diagonal_frobenius(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (i != j) s += std::norm(a(i, j));
    }
  }
  return std::sqrt(s);
}

}  // namespace reference

}  // namespace anop::kernels

#include "anop/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "anop/kernels.hpp"

namespace anop {

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) throw Error(ErrorCode::ShapeMismatch, "entry count does not match shape");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const Complex> d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::adjoint() const {
  Matrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  }
  return m;
}

Matrix Matrix::hermitian_part() const {
  Matrix m = *this + adjoint();
  return m *= 0.5;
}

Matrix Matrix::skew_part() const {
  Matrix m = *this - adjoint();
  return m *= Complex(0.0, -0.5);
}

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

Matrix& Matrix::operator+=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw Error(ErrorCode::ShapeMismatch, "matrix sum shape");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw Error(ErrorCode::ShapeMismatch, "matrix difference shape");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(Complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  Matrix c;
  kernels::gemm(a, b, c);
  return c;
}

double frobenius_norm(const Matrix& a) { return kernels::frobenius(a); }

double hermitian_defect(const Matrix& a) {
  if (!a.square()) return std::numeric_limits<double>::infinity();
  return frobenius_norm(a - a.adjoint());
}

Matrix columns(const Matrix& a, std::size_t first, std::size_t count) {
  Matrix m(a.rows(), count);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < count; ++j) m(i, j) = a(i, first + j);
  }
  return m;
}

Matrix select_columns(const Matrix& a, std::span<const std::size_t> idx) {
  Matrix m(a.rows(), idx.size());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < idx.size(); ++j) m(i, j) = a(i, idx[j]);
  }
  return m;
}

}  // namespace anop

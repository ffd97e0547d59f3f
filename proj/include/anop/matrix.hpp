#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "anop/error.hpp"

namespace anop {

using Complex = std::complex<double>;

/// Default tolerance for verification residuals.
inline constexpr double kDefaultTolerance = 1e-10;
/// Largest dimension the dense backend accepts.
inline constexpr std::size_t kMaxDim = 1024;

/// Dense row-major complex matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const Complex> d);
  static Matrix diagonal(std::span<const double> d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }

  Matrix adjoint() const;
  Matrix hermitian_part() const;
  Matrix skew_part() const;  // (T - T*) / 2i, Hermitian
  bool all_finite() const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(Complex s);

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, Complex s) { return a *= s; }
  friend Matrix operator*(Complex s, Matrix a) { return a *= s; }
  friend Matrix operator*(const Matrix& a, const Matrix& b);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

double frobenius_norm(const Matrix& a);
/// sqrt of the largest eigenvalue of A*A.
double spectral_norm(const Matrix& a);
/// Frobenius norm of A - A*.
double hermitian_defect(const Matrix& a);

/// Columns [first, first + count) of a.
Matrix columns(const Matrix& a, std::size_t first, std::size_t count);
/// Columns of a selected by index.
Matrix select_columns(const Matrix& a, std::span<const std::size_t> idx);

}  // namespace anop

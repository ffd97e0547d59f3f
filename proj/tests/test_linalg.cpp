#include <gtest/gtest.h>

#include <algorithm>

#include "anop/kernels.hpp"
#include "anop/linalg.hpp"
#include "support.hpp"

namespace anop {
namespace {

using namespace anop::testing;

Matrix real_diag(std::vector<double> d) { return Matrix::diagonal(std::span<const double>(d)); }

double eigen_residual(const Matrix& t, const EigenDecomposition& e) {
  const Matrix lambda = real_diag(e.eigenvalues);
  return frobenius_norm(t * e.basis - e.basis * lambda);
}

Matrix random_psd(std::size_t n, std::uint64_t seed) {
  const Matrix a = random_matrix(n, n, seed);
  return a.adjoint() * a;
}

TEST(Kernels, MatchReference) {
  for (std::size_t n : {3u, 17u, 40u, 64u}) {
    const Matrix a = random_matrix(n, n + 3, n);
    const Matrix b = random_matrix(n + 3, n, n + 100);
    Matrix fast, slow;
    kernels::gemm(a, b, fast);
    kernels::reference::gemm(a, b, slow);
    EXPECT_LE(frobenius_norm(fast - slow), 1e-12 * frobenius_norm(slow));

    kernels::gemm_adjoint_left(a, a, fast);
    kernels::reference::gemm_adjoint_left(a, a, slow);
    EXPECT_LE(frobenius_norm(fast - slow), 1e-12 * frobenius_norm(slow));
    EXPECT_LE(frobenius_norm(fast - a.adjoint() * a), 1e-12 * frobenius_norm(slow));

    const Matrix h = random_hermitian(n, n);
    EXPECT_NEAR(kernels::frobenius(h), kernels::reference::frobenius(h), 1e-12);
    EXPECT_NEAR(kernels::off_diagonal_frobenius(h), kernels::reference::off_diagonal_frobenius(h), 1e-12);
  }
}

TEST(Matrix, ShapeChecks) {
  EXPECT_THROW(Matrix(2, 2) + Matrix(2, 3), Error);
  EXPECT_THROW(Matrix(2, 2, std::vector<Complex>(3)), Error);
  EXPECT_THROW(Matrix(2, 3) * Matrix(2, 3), Error);
}

TEST(Matrix, HermitianAndSkewParts) {
  const Matrix t = random_matrix(6, 6, 3);
  const Matrix re = t.hermitian_part();
  const Matrix im = t.skew_part();
  EXPECT_LE(hermitian_defect(re), 1e-15);
  EXPECT_LE(hermitian_defect(im), 1e-15);
  EXPECT_LE(frobenius_norm(re + Complex(0.0, 1.0) * im - t), 1e-14);
}

TEST(Eigen, DiagonalSorted) {
  const auto e = hermitian_eigen(real_diag({3.0, 1.0, 2.0}));
  EXPECT_EQ(e.eigenvalues, (std::vector{1.0, 2.0, 3.0}));
}

TEST(Eigen, PauliX) {
  Matrix x(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  const auto e = hermitian_eigen(x);
  EXPECT_NEAR(e.eigenvalues[0], -1.0, 1e-15);
  EXPECT_NEAR(e.eigenvalues[1], 1.0, 1e-15);
}

TEST(Eigen, RandomHermitianResiduals) {
  for (std::size_t n : {1u, 2u, 8u, 32u, 64u}) {
    const Matrix t = random_hermitian(n, 40 + n);
    const auto e = hermitian_eigen(t);
    EXPECT_LE(eigen_residual(t, e), 1e-10 * frobenius_norm(t)) << n;
    EXPECT_LE(frobenius_norm(e.basis.adjoint() * e.basis - Matrix::identity(n)), 1e-10) << n;
    EXPECT_TRUE(std::is_sorted(e.eigenvalues.begin(), e.eigenvalues.end()));
  }
}

TEST(Eigen, ComplexPhases) {
  Matrix t(2, 2);
  t(0, 0) = 1.0;
  t(1, 1) = -1.0;
  t(0, 1) = Complex(0.0, 2.0);
  t(1, 0) = Complex(0.0, -2.0);
  const auto e = hermitian_eigen(t);
  EXPECT_NEAR(e.eigenvalues[0], -std::sqrt(5.0), 1e-14);
  EXPECT_NEAR(e.eigenvalues[1], std::sqrt(5.0), 1e-14);
  EXPECT_LE(eigen_residual(t, e), 1e-13);
}

TEST(Eigen, Errors) {
  try {
    hermitian_eigen(random_matrix(4, 4, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotHermitian);
  }
  try {
    hermitian_eigen(random_hermitian(16, 2), kDefaultTolerance, 1e-13, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoConvergence);
  }
}

TEST(Eigen, NormalMatrices) {
  const std::vector<Complex> d = {{1.0, 2.0}, {-1.0, 0.5}, {1.0, -2.0}, {0.0, 0.0}, {3.0, 0.0}};
  const Matrix q = random_matrix(5, 5, 9);
  // orthonormalize q through the eigenbasis of a Hermitian matrix
  const Matrix u = hermitian_eigen(q.hermitian_part()).basis;
  const Matrix t = u * Matrix::diagonal(std::span<const Complex>(d)) * u.adjoint();
  const auto e = normal_eigen(t);
  const Matrix lambda = Matrix::diagonal(std::span<const Complex>(e.eigenvalues));
  EXPECT_LE(frobenius_norm(t * e.basis - e.basis * lambda), 1e-10 * frobenius_norm(t));
}

TEST(Sqrt, Examples) {
  EXPECT_LE(frobenius_norm(positive_sqrt(real_diag({4.0, 9.0})) - real_diag({2.0, 3.0})), 1e-15);
  EXPECT_EQ(positive_sqrt(Matrix(3, 3)), Matrix(3, 3));
  for (std::size_t n : {4u, 16u, 48u}) {
    const Matrix t = random_psd(n, n);
    const Matrix s = positive_sqrt(t);
    EXPECT_LE(frobenius_norm(s * s - t), 1e-10 * frobenius_norm(t));
    EXPECT_GE(hermitian_eigen(s).eigenvalues.front(), -1e-10);
  }
  EXPECT_THROW(positive_sqrt(real_diag({1.0, -1.0})), Error);
}

TEST(Polar, NilpotentExample) {
  Matrix t(2, 2);
  t(0, 1) = 2.0;
  const auto p = polar_decompose(t);
  EXPECT_LE(frobenius_norm(p.modulus - real_diag({0.0, 2.0})), 1e-14);
  Matrix v(2, 2);
  v(0, 1) = 1.0;
  EXPECT_LE(frobenius_norm(p.v - v), 1e-14);
  EXPECT_LE(frobenius_norm(p.v.adjoint() * p.v - real_diag({0.0, 1.0})), 1e-14);
}

TEST(Polar, PositiveAndZero) {
  const Matrix t = random_psd(6, 4);
  const auto p = polar_decompose(t);
  EXPECT_LE(frobenius_norm(p.v - Matrix::identity(6)), 1e-9);
  EXPECT_LE(frobenius_norm(p.modulus - t), 1e-10 * frobenius_norm(t));
  const auto z = polar_decompose(Matrix(3, 2));
  EXPECT_EQ(z.v, Matrix(3, 2));
  EXPECT_EQ(z.modulus, Matrix(2, 2));
}

TEST(Polar, RandomInvariants) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t rows = 2 + seed % 9, cols = 2 + (seed * 7) % 9;
    Matrix t = random_matrix(rows, cols, seed);
    if (seed % 3 == 0) t = t * random_matrix(cols, 2, seed + 99) * random_matrix(2, cols, seed + 7);  // rank 2
    const auto p = polar_decompose(t);
    const double scale = frobenius_norm(t);
    EXPECT_LE(frobenius_norm(p.v * p.modulus - t), 1e-10 * scale) << seed;
    const Matrix proj = p.v.adjoint() * p.v;
    EXPECT_LE(frobenius_norm(proj * proj - proj), 1e-10) << seed;
    EXPECT_LE(frobenius_norm(proj * p.modulus - p.modulus), 1e-10 * scale) << seed;
  }
}

TEST(Polar, NormalCommutes) {
  const std::vector<Complex> d = {{0.0, 2.0}, {-1.0, 0.0}, {0.5, 0.5}, {0.0, 0.0}};
  const Matrix u = hermitian_eigen(random_hermitian(4, 5)).basis;
  const Matrix t = u * Matrix::diagonal(std::span<const Complex>(d)) * u.adjoint();
  const auto p = polar_decompose(t);
  EXPECT_LE(frobenius_norm(p.v * p.modulus - p.modulus * p.v), 1e-10 * frobenius_norm(t));
}

TEST(Lu, InverseAndSingular) {
  for (std::size_t n : {1u, 5u, 32u}) {
    const Matrix a = random_matrix(n, n, 77 + n);
    EXPECT_LE(frobenius_norm(a * inverse(a) - Matrix::identity(n)), 1e-10);
  }
  try {
    inverse(real_diag({1.0, 0.0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Singular);
  }
}

TEST(Properties, MinimumModulusTimesInverseNorm) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t n = 2 + seed % 30;
    const Matrix t = random_matrix(n, n, seed + 500);
    const double m = std::sqrt(std::max(0.0, hermitian_eigen((t.adjoint() * t).hermitian_part()).eigenvalues.front()));
    const double product = m * spectral_norm(inverse(t));
    EXPECT_NEAR(product, 1.0, 1e-8) << seed;
  }
}

TEST(Properties, NullSpaceComparison) {
  // S <= T with both PSD: N(T) is contained in N(S)
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 6;
    const Matrix b = random_matrix(n, 3, seed);
    const Matrix t = b * b.adjoint();  // rank 3
    const Matrix c = b * real_diag({0.5, 0.25, 0.0}) * b.adjoint();
    const Matrix s = c;                // 0 <= S <= T
    EXPECT_GE(hermitian_eigen((t - s).hermitian_part()).eigenvalues.front(), -1e-10);
    const auto e = hermitian_eigen(t.hermitian_part());
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(e.eigenvalues[j]) > 1e-10 * e.eigenvalues.back()) continue;
      const Matrix x = columns(e.basis, j, 1);
      EXPECT_LE(frobenius_norm(s * x), 1e-10 * frobenius_norm(s)) << seed;
    }
  }
}

TEST(Properties, InverseDifferenceIdentity) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t n = 3 + seed % 20;
    const Matrix s = random_matrix(n, n, seed) + 3.0 * Matrix::identity(n);
    const Matrix t = random_matrix(n, n, seed + 1000) + 3.0 * Matrix::identity(n);
    const Matrix si = inverse(s), ti = inverse(t);
    EXPECT_LE(frobenius_norm(si - ti - ti * (t - s) * si), 1e-10) << seed;
  }
}

TEST(Properties, HermitianNormIsEigenvalue) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Matrix t = random_hermitian(3 + seed, seed);
    const auto e = hermitian_eigen(t);
    const double norm = spectral_norm(t);
    const double top = std::max(std::abs(e.eigenvalues.front()), std::abs(e.eigenvalues.back()));
    EXPECT_NEAR(norm, top, 1e-10 * std::max(1.0, norm));
  }
}

}  // namespace
}  // namespace anop

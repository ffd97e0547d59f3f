#pragma once

// Dense eigen- and singular-value machinery for the finite-dimensional
// realizations: cyclic Jacobi for Hermitian matrices, one-sided Jacobi SVD,
// positive square roots, polar decomposition, and an LU solver used as the
// independent direct-solve baseline.

#include <functional>
#include <vector>

#include "anop/matrix.hpp"

namespace anop {

/// Convergence threshold of the Jacobi sweeps, relative to the Frobenius norm.
inline constexpr double kEigenConvergence = 1e-13;
inline constexpr int kMaxSweeps = 100;

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  Matrix basis;                     // eigenvectors as columns
};

struct NormalEigenDecomposition {
  std::vector<Complex> eigenvalues;
  Matrix basis;
};

struct SingularValueDecomposition {
  Matrix u;                    // rows x cols; zero columns where sigma = 0
  std::vector<double> sigma;   // unsorted, paired with columns of u and v
  Matrix v;                    // cols x cols unitary
};

struct PolarPair {
  Matrix v;        // partial isometry
  Matrix modulus;  // (T*T)^{1/2}
};

/// Cyclic two-sided Jacobi. Throws NOT_HERMITIAN or NO_CONVERGENCE.
EigenDecomposition hermitian_eigen(const Matrix& t, double tol = kDefaultTolerance,
                                   double convergence = kEigenConvergence, int max_sweeps = kMaxSweeps);

/// Q f(diag) Q* for a Hermitian eigendecomposition.
Matrix spectral_function(const EigenDecomposition& e, const std::function<double(double)>& f);

/// Diagonalizes a normal matrix by splitting Re(T) eigenspaces with Im(T).
/// Eigenvalues of Re(T) closer than the grouping tolerance are treated as one
/// eigenspace; when distinct real parts fall inside that window the split is
/// wrong and the residual check throws NO_CONVERGENCE.
NormalEigenDecomposition normal_eigen(const Matrix& t, double tol = kDefaultTolerance);

/// One-sided (Hestenes) Jacobi SVD.
SingularValueDecomposition jacobi_svd(const Matrix& t, int max_sweeps = kMaxSweeps);

/// Ascending singular values.
std::vector<double> singular_values(const Matrix& t);

/// Hermitian PSD square root. Throws NOT_PSD when an eigenvalue is below
/// -tol * max(1, ||T||).
Matrix positive_sqrt(const Matrix& t, double tol = kDefaultTolerance);

PolarPair polar_decompose(const Matrix& t, double tol = kDefaultTolerance);

/// Gaussian elimination with partial pivoting. Throws SINGULAR.
Matrix lu_solve(const Matrix& a, const Matrix& b);
Matrix inverse(const Matrix& a);

}  // namespace anop

#pragma once

// Finite-dimensional realizations of decompositions and the numeric checks
// run on them: structure verification, reducing block forms, the block
// inverse, and the positivity witness for K - F + alpha*V.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "anop/decomposition.hpp"
#include "anop/linalg.hpp"

namespace anop {

/// Seed 0 is the identity. Any other seed multiplies n Householder
/// reflections whose vectors come from a splitmix64 stream.
Matrix random_unitary(std::size_t n, std::uint64_t seed);

struct Realization {
  Matrix t, k, f, v;
  double alpha = 0.0;
  Matrix basis;
  /// Diagonal of T in the realization basis, in fill order.
  std::vector<Complex> spectrum;
  bool hermitian = true;
};

using RealizableData = std::variant<PositiveTriple, StructuredDecomposition>;

/// Truncates the diagonal model to dim directions: every finite-multiplicity
/// direction first, then infinite parts in round-robin order (cluster terms
/// in decreasing offset, infinite identity or kernel directions). With no
/// infinite part left, pads with identity directions (kernel directions for
/// structured data). Throws DIM_TOO_SMALL.
Realization realize_matrix(const RealizableData& data, std::size_t dim, std::uint64_t seed);

struct VerificationReport {
  double residual_reconstruction = 0.0;
  double residual_kf = 0.0;
  double min_eig_alpha_minus_f = 0.0;
  double psd_defect_k = 0.0;
  double psd_defect_f = 0.0;
  double converse_min_eig = 0.0;
  double offdiag_upper = 0.0;
  double offdiag_lower = 0.0;
  std::vector<std::string> failures;
  bool passed = false;
};

/// Checks T = K - F + alpha*V, KF = K*F = KF* = 0, 0 <= V*F <= alpha, V*K >= 0,
/// K*K + alpha(V*K + K*V) >= 0 and that R(F) reduces T. Tolerances scale with
/// max(1, ||T||_F).
VerificationReport verify_structure(const Matrix& t, const Matrix& k, const Matrix& f, const Matrix& v,
                                    double alpha, double tol = kDefaultTolerance);

struct BlockForm {
  Matrix null_basis;
  Matrix range_basis;
  Matrix nn, nr, rn, rr;
  double offdiag_upper = 0.0;  // ||P_N T P_R||
  double offdiag_lower = 0.0;  // ||P_R T P_N||
};

/// 2x2 block form of T with respect to (N(S), R(S)) for a Hermitian PSD
/// splitter S. Eigenvalues of S at or below tol * max eigenvalue count as
/// null directions.
BlockForm block_form(const Matrix& t, const Matrix& splitter, double tol = kDefaultTolerance);

struct BlockInverse {
  Matrix t_inv;
  double residual = 0.0;         // ||T X - I||_F
  double direct_residual = 0.0;  // same for the LU inverse
  double agreement = 0.0;        // ||X - LU inverse||_F
};

/// Inverse of a positive AN realization from the (N(F), R(F)) blocks:
/// alpha^-1 I - alpha^-1 K0 (K0 + alpha)^-1  on N(F),
/// alpha^-1 I + alpha^-1 F0 (alpha - F0)^-1  on R(F).
/// Throws SINGULAR.
BlockInverse inverse_via_blocks(const Matrix& t, const Matrix& k, const Matrix& f, double alpha,
                                double tol = kDefaultTolerance);
BlockInverse inverse_via_blocks(const Realization& r, double tol = kDefaultTolerance);

struct ConverseWitness {
  Matrix script_k;  // K*K + alpha(V*K + K*V)
  Matrix script_f;  // K*F + F*K + alpha(V*F + F*V) - F*F
  double script_k_min_eig = 0.0;
  double t_star_t_residual = 0.0;  // ||T*T - (script_k - script_f + alpha^2 V*V)||_F
  bool an_predicted = false;
};

/// an_predicted is script_k >= -tol. Throws NOT_PARTIAL_ISOMETRY when
/// ||V V* V - V|| exceeds tol.
ConverseWitness converse_witness(const Matrix& k, const Matrix& f, const Matrix& v, double alpha,
                                 double tol = kDefaultTolerance);

}  // namespace anop

#include <gtest/gtest.h>

#include <algorithm>

#include "anop/realize.hpp"
#include "support.hpp"

namespace anop {
namespace {

using namespace anop::testing;

Matrix real_diag(std::vector<double> d) { return Matrix::diagonal(std::span<const double>(d)); }

PositiveTriple simple_triple() {
  // alpha = 1, K = 1 on one direction, identity elsewhere
  PositiveTriple t;
  t.alpha = 1.0;
  t.k = positive({{1.0, fin(1)}});
  t.identity = inf();
  return t;
}

bool has_failure(const VerificationReport& r, const std::string& name) {
  return std::find(r.failures.begin(), r.failures.end(), name) != r.failures.end();
}

TEST(RandomUnitary, SeedZeroIsIdentity) {
  EXPECT_EQ(random_unitary(5, 0), Matrix::identity(5));
  for (std::uint64_t seed : {1u, 7u, 1234u}) {
    const Matrix q = random_unitary(12, seed);
    EXPECT_LE(frobenius_norm(q.adjoint() * q - Matrix::identity(12)), 1e-13);
    EXPECT_EQ(q, random_unitary(12, seed));
  }
  EXPECT_NE(random_unitary(4, 1), random_unitary(4, 2));
}

TEST(Realize, IdentityBasis) {
  const auto r = realize_matrix(simple_triple(), 2, 0);
  EXPECT_EQ(r.t, real_diag({2.0, 1.0}));
  EXPECT_EQ(r.k, real_diag({1.0, 0.0}));
  EXPECT_EQ(r.f, Matrix(2, 2));
}

TEST(Realize, RotatedBasisKeepsSpectrum) {
  const auto r = realize_matrix(simple_triple(), 2, 7);
  const auto e = hermitian_eigen(r.t);
  EXPECT_NEAR(e.eigenvalues[0], 1.0, 1e-12);
  EXPECT_NEAR(e.eigenvalues[1], 2.0, 1e-12);
}

TEST(Realize, SignedStructure) {
  const auto sd = structure_selfadjoint(model(Kind::SelfAdjoint, {{3.0, fin(1)}, {-1.0, fin(1)}, {-2.0, inf()}}));
  const auto r = realize_matrix(sd, 6, 3);
  EXPECT_TRUE(r.hermitian);
  EXPECT_LE(hermitian_defect(r.t), 1e-13);
  const auto e = hermitian_eigen(r.t);
  const std::vector<double> expected = {-2.0, -2.0, -2.0, -2.0, -1.0, 3.0};
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(e.eigenvalues[i], expected[i], 1e-12);
}

TEST(Realize, DimTooSmall) {
  PositiveTriple t = simple_triple();
  t.k = positive({{1.0, fin(3)}});
  try {
    realize_matrix(t, 2, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimTooSmall);
  }
}

TEST(Realize, ClusterTermsFill) {
  PositiveTriple t;
  t.alpha = 1.0;
  t.k = positive({}, {cluster(0.0, Side::Above, DecaySequence::geometric(1.0, 0.5))});
  const auto r = realize_matrix(t, 4, 0);
  ASSERT_EQ(r.spectrum.size(), 4u);
  EXPECT_EQ(r.spectrum[0], Complex(2.0));
  EXPECT_EQ(r.spectrum[3], Complex(1.125));
}

TEST(Verify, GeneratedRealizationsPass) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto m = generate_model({seed, static_cast<Family>(seed % 3), std::nullopt});
    RealizableData data;
    if (m.kind == Kind::Positive) {
      data = decompose_positive(m);
    } else if (m.kind == Kind::SelfAdjoint) {
      data = structure_selfadjoint(m);
    } else {
      data = structure_normal(m);
    }
    const auto r = realize_at_least(data, 8 + seed, seed + 1);
    const auto rep = verify_structure(r.t, r.k, r.f, r.v, r.alpha);
    EXPECT_TRUE(rep.passed) << seed << ": " << (rep.failures.empty() ? "" : rep.failures.front());
  }
}

TEST(Verify, ForcedFViolation) {
  const auto r = realize_matrix(simple_triple(), 4, 0);
  Matrix f = r.f;
  f(1, 1) += 2.0 * r.alpha;
  const auto rep = verify_structure(r.t, r.k, f, r.v, r.alpha);
  EXPECT_LT(rep.min_eig_alpha_minus_f, 0.0);
  EXPECT_TRUE(has_failure(rep, "min_eig_alpha_minus_f"));
  EXPECT_FALSE(rep.passed);
}

TEST(Verify, OverlappingSupports) {
  const double alpha = 1.0;
  const Matrix k = real_diag({1.0, 0.0, 0.0});
  const Matrix f = real_diag({0.5, 0.0, 0.0});
  const Matrix t = k - f + Complex(alpha) * Matrix::identity(3);
  const auto rep = verify_structure(t, k, f, Matrix::identity(3), alpha);
  EXPECT_GT(rep.residual_kf, 0.0);
  EXPECT_TRUE(has_failure(rep, "residual_kf"));
  EXPECT_FALSE(rep.passed);
}

TEST(Verify, ShapeMismatch) {
  try {
    verify_structure(Matrix(3, 3), Matrix(3, 3), Matrix(2, 2), Matrix(3, 3), 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ShapeMismatch);
  }
}

TEST(Blocks, DiagonalExample) {
  const Matrix t = real_diag({3.0, 1.0, 0.5});
  const Matrix f = real_diag({0.0, 0.0, 0.5});
  const auto bf = block_form(t, f);
  EXPECT_EQ(bf.null_basis.cols(), 2u);
  EXPECT_EQ(bf.range_basis.cols(), 1u);
  EXPECT_EQ(bf.offdiag_upper, 0.0);
  EXPECT_EQ(bf.offdiag_lower, 0.0);
  EXPECT_NEAR(bf.rr(0, 0).real(), 0.5, 1e-15);
  const auto nn = hermitian_eigen(bf.nn.hermitian_part()).eigenvalues;
  EXPECT_NEAR(nn[0], 1.0, 1e-15);
  EXPECT_NEAR(nn[1], 3.0, 1e-15);
}

TEST(Blocks, RotatedCopy) {
  PositiveTriple t;
  t.alpha = 1.0;
  t.k = positive({{2.0, fin(1)}});
  t.f = {{0.5, fin(1)}};
  t.identity = inf();
  const auto r = realize_matrix(t, 3, 7);
  const auto bf = block_form(r.t, r.f);
  EXPECT_LE(std::max(bf.offdiag_upper, bf.offdiag_lower), 1e-10);
}

TEST(Blocks, KernelOfKCarriesAlphaMinusF) {
  PositiveTriple t;
  t.alpha = 2.0;
  t.k = positive({{1.0, fin(2)}});
  t.f = {{0.5, fin(1)}, {1.5, fin(1)}};
  t.identity = inf();
  const auto r = realize_matrix(t, 8, 11);
  const auto bf = block_form(r.t, r.k);
  EXPECT_LE(std::max(bf.offdiag_upper, bf.offdiag_lower), 1e-10);
  // on N(K): T = alpha - F
  const Matrix fn = bf.null_basis.adjoint() * r.f * bf.null_basis;
  const Matrix expected = Complex(t.alpha) * Matrix::identity(fn.rows()) - fn;
  EXPECT_LE(frobenius_norm(bf.nn - expected), 1e-10);
}

TEST(BlockInverse, DiagonalExample) {
  const Matrix t = real_diag({3.0, 0.5});
  const auto b = inverse_via_blocks(t, real_diag({2.0, 0.0}), real_diag({0.0, 0.5}), 1.0);
  EXPECT_LE(frobenius_norm(b.t_inv - real_diag({1.0 / 3.0, 2.0})), 1e-14);
}

TEST(BlockInverse, RotatedRealization) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    PositiveTriple t = generated_triple(seed);
    if (t.alpha == 0.0 || std::any_of(t.f.begin(), t.f.end(), [&](const FEntry& e) { return e.value >= t.alpha; })) {
      continue;
    }
    const auto r = realize_matrix(t, 16, 7);
    const auto b = inverse_via_blocks(r);
    EXPECT_LE(b.residual, 1e-8) << seed;
    EXPECT_LE(b.agreement, 1e-8) << seed;
  }
}

TEST(BlockInverse, SingularWhenFReachesAlpha) {
  PositiveTriple t;
  t.alpha = 1.0;
  t.f = {{1.0, fin(1)}};
  t.identity = inf();
  const auto r = realize_matrix(t, 4, 3);
  try {
    inverse_via_blocks(r);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Singular);
  }
}

TEST(Converse, DiagonalCommutingCase) {
  PositiveTriple t;
  t.alpha = 2.0;
  t.k = positive({{1.0, fin(1)}, {3.0, fin(1)}});
  t.f = {{0.5, fin(1)}};
  t.identity = inf();
  const auto r = realize_matrix(t, 5, 0);
  const auto w = converse_witness(r.k, r.f, r.v, r.alpha);
  const Matrix expected = r.k * r.k + Complex(2.0 * r.alpha) * r.k;
  EXPECT_LE(frobenius_norm(w.script_k - expected), 1e-13);
  EXPECT_GE(w.script_k_min_eig, -1e-12);
  EXPECT_TRUE(w.an_predicted);
  EXPECT_LE(w.t_star_t_residual, 1e-12);
  // script_f reduces to F1 of the squared triple
  const Matrix f1 = Complex(2.0 * r.alpha) * r.f - r.f * r.f;
  EXPECT_LE(frobenius_norm(w.script_f - f1), 1e-13);
}

TEST(Converse, ForcedViolation) {
  const double alpha = 1.0;
  const std::size_t n = 4;
  Matrix p(n, n);
  p(0, 0) = 1.0;
  const Matrix k = Complex(-alpha / 2.0) * p;
  const auto w = converse_witness(k, Matrix(n, n), Matrix::identity(n), alpha);
  EXPECT_LT(w.script_k_min_eig, 0.0);
  EXPECT_FALSE(w.an_predicted);
}

TEST(Converse, NormalStructuredIdentity) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto m = generate_model({seed, Family::AnNormal, std::nullopt});
    const auto r = realize_at_least(structure_normal(m), 12, seed + 1);
    const auto w = converse_witness(r.k, r.f, r.v, r.alpha);
    EXPECT_LE(w.t_star_t_residual, 1e-10 * std::max(1.0, frobenius_norm(r.t) * frobenius_norm(r.t))) << seed;
    EXPECT_TRUE(w.an_predicted) << seed;
  }
}

TEST(Converse, RejectsNonPartialIsometry) {
  try {
    converse_witness(Matrix(2, 2), Matrix(2, 2), real_diag({2.0, 1.0}), 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPartialIsometry);
  }
}

}  // namespace
}  // namespace anop

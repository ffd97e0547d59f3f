#pragma once

// Canonical decompositions of AN operators given by their spectra:
//   positive T = K - F + alpha*I   (K positive compact, F positive finite
//                                   rank, KF = 0, F <= alpha*I)
//   normal   T = K - F + alpha*V   (V the phase of T, K = V K1, F = V F1)
//   inverse  T^-1 = beta*I - K1 + F1
// and the algebra built on them. Everything operates on diagonal models, so
// K and F are carried by their eigenvalues on disjoint supports.

#include <optional>
#include <string_view>
#include <vector>

#include "anop/spectrum.hpp"

namespace anop {

/// Eigenvalue of a finite-rank part with its (finite) multiplicity.
struct FEntry {
  double value = 0.0;
  Multiplicity mult = Multiplicity::finite(1);
};

struct PositiveTriple {
  double alpha = 0.0;
  /// Eigenvalues of K: strictly positive points with finite multiplicity and
  /// at most one cluster at 0 approached from above.
  SpectrumModel k;
  std::vector<FEntry> f;
  /// Directions where K = F = 0, i.e. where T acts as alpha.
  Multiplicity identity;
};

enum class UniquenessCase { AlphaZero, FZero, KZero, KAndF };

std::string_view to_string(UniquenessCase c);

enum class BlockPart { Identity, K, F, KCluster };

std::string_view to_string(BlockPart p);

/// One diagonal block of a structured decomposition. value is the modulus
/// side entry (k of K1 or f of F1); the operator entries are phase*value.
struct Block {
  Complex phase{1.0, 0.0};
  BlockPart part = BlockPart::Identity;
  double value = 0.0;
  /// Offsets of K1 for a KCluster block.
  std::optional<DecaySequence> deltas;
  /// Ignored for KCluster blocks, which are infinite.
  Multiplicity mult = Multiplicity::finite(1);
};

struct StructuredDecomposition {
  Kind kind = Kind::SelfAdjoint;
  double alpha = 0.0;
  std::vector<Block> support;
  /// Directions where V = 0 (the kernel of T).
  Multiplicity kernel;
};

struct AMForm {
  double beta = 0.0;
  /// Eigenvalues of K1 (each <= beta), paired with the K entries of the
  /// source triple in the same order.
  SpectrumModel k1;
  /// Eigenvalues of F1, paired with the F entries of the source triple.
  std::vector<FEntry> f1;
  Multiplicity identity;
};

struct FredholmReport {
  Multiplicity kernel_dimension;
  bool range_closed = false;
  bool is_injective = false;
  bool is_fredholm = false;
  int index = 0;
  bool is_left_semi_fredholm = false;
  double essential_min_modulus = 0.0;
};

/// Throws Error(Malformed) when the triple violates its invariants.
void validate_triple(const PositiveTriple& t);
/// Normalized K, merged and sorted F entries.
PositiveTriple canonical_triple(const PositiveTriple& t);
bool triples_equal(const PositiveTriple& a, const PositiveTriple& b, double tol,
                   std::size_t depth = kDefaultMapDepth);
UniquenessCase uniqueness_case(const PositiveTriple& t);

PositiveTriple decompose_positive(const SpectrumModel& model);
SpectrumModel recompose(const PositiveTriple& t);

PositiveTriple square_triple(const PositiveTriple& t, std::size_t depth = kDefaultMapDepth);
PositiveTriple sqrt_triple(const PositiveTriple& t, std::size_t depth = kDefaultMapDepth);

AMForm invert_triple(const PositiveTriple& t, std::size_t depth = kDefaultMapDepth);
/// Spectrum of beta*I - K1 + F1.
SpectrumModel am_spectrum(const AMForm& am);

StructuredDecomposition structure_selfadjoint(const SpectrumModel& model);
StructuredDecomposition structure_normal(const SpectrumModel& model);
/// Spectrum of K - F + alpha*V.
SpectrumModel recombine(const StructuredDecomposition& sd);

SpectrumModel gram_spectrum(const SpectrumModel& model, std::size_t depth = kDefaultMapDepth);
SpectrumModel adjoint_spectrum(const SpectrumModel& model);
SpectrumModel imaginary_shift(const SpectrumModel& model, double lambda);

FredholmReport fredholm_report(const PositiveTriple& t);

}  // namespace anop

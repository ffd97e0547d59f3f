#pragma once

// Independent checks for the classifier: brute-force attainment over
// eigenbasis subsets, an eigenvalue-counting form of Weyl stability, and
// seeded model generators. The attainment oracle does not call
// modulus_spectrum or classify.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "anop/matrix.hpp"
#include "anop/spectrum.hpp"

namespace anop {

struct TruncationProfile {
  std::size_t depth = 12;       // terms materialized per cluster
  std::size_t subset_cap = 14;  // largest exhaustively enumerated atom set
};

enum class Family { AnPositive, AnSelfAdjoint, AnNormal, Violator };

std::string_view to_string(Family f);

struct GeneratorProfile {
  std::uint64_t seed = 0;
  Family family = Family::AnPositive;
  /// Required for Family::Violator.
  std::optional<Violation> code;
};

/// Decides AN-membership by enumerating attainment patterns: every subset of
/// the materialized moduli (up to subset_cap of them) combined with every
/// choice of symbolic tails (infinite eigenspaces, cluster tails). A tail
/// that increases to its limit is unattained unless the pattern holds
/// something at least as large. Two infinite-dimensional pieces at different
/// moduli admit a mixed subspace whose norm increases to the larger one
/// without reaching it.
ANVerdict attainment_oracle(const SpectrumModel& model, const TruncationProfile& profile = {});

struct RankPerturbationResult {
  std::size_t max_count_shift = 0;
  std::size_t rank = 0;
  bool passed = false;
};

/// Number of grid points in the eigenvalue-counting check.
inline constexpr std::size_t kCountGrid = 257;

/// Compares #{eig <= x} of diag(tail) and diag(tail) + P on a grid of 257
/// points over [min eig - 1, max eig + 1]; the shift may not exceed rank(P).
RankPerturbationResult rank_perturbation_check(std::span<const double> tail_diag, const Matrix& perturbation,
                                               double tol = kDefaultTolerance);

SpectrumModel generate_model(const GeneratorProfile& profile);

/// Family rotation used by property runs: seed % 8 picks one of the three AN
/// families or one of the five violation codes.
GeneratorProfile profile_for_trial(std::uint64_t seed);

/// Random Hermitian matrix of the given rank (sum of rank-one terms).
Matrix random_hermitian_of_rank(std::size_t n, std::size_t rank, std::uint64_t seed);

}  // namespace anop

#pragma once

#include <cmath>
#include <vector>

#include "anop/decomposition.hpp"
#include "anop/matrix.hpp"
#include "anop/oracle.hpp"
#include "anop/realize.hpp"
#include "anop/rng.hpp"
#include "anop/spectrum.hpp"

namespace anop::testing {

inline Multiplicity fin(std::uint64_t n) { return Multiplicity::finite(n); }
inline Multiplicity inf() { return Multiplicity::infinite(); }

inline SpectrumModel model(Kind kind, std::vector<EigenvalueEntry> points, std::vector<Cluster> clusters = {}) {
  SpectrumModel m;
  m.kind = kind;
  m.points = std::move(points);
  m.clusters = std::move(clusters);
  return m;
}

inline SpectrumModel positive(std::vector<EigenvalueEntry> points, std::vector<Cluster> clusters = {}) {
  return model(Kind::Positive, std::move(points), std::move(clusters));
}

inline Cluster cluster(Complex limit, Side side, DecaySequence deltas) { return {limit, side, std::move(deltas), {}}; }

inline bool close(double a, double b, double rel = 1e-12) {
  return std::abs(a - b) <= rel * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Matrix m(rows, cols);
  for (auto& z : m.data()) z = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  return m;
}

inline Matrix random_hermitian(std::size_t n, std::uint64_t seed) { return random_matrix(n, n, seed).hermitian_part(); }

/// Valid triple from the AN_POSITIVE generator.
inline PositiveTriple generated_triple(std::uint64_t seed) {
  return decompose_positive(generate_model({seed, Family::AnPositive, std::nullopt}));
}

/// Realization with at least min_dim directions, grown until every
/// finite-multiplicity direction fits.
inline Realization realize_at_least(const RealizableData& data, std::size_t min_dim, std::uint64_t seed) {
  for (std::size_t dim = min_dim;; ++dim) {
    try {
      return realize_matrix(data, dim, seed);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DimTooSmall || dim >= kMaxDim) throw;
    }
  }
}

}  // namespace anop::testing

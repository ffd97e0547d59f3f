#include "anop/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "anop/linalg.hpp"
#include "anop/rng.hpp"

namespace anop {

namespace {

constexpr double kTol = kMergeTolerance;

// An infinite-dimensional part of the spectrum seen through moduli.
struct Piece {
  enum class Type { Flat, Tail } type;
  double level;           // modulus of the eigenspace, or of the cluster limit
  bool increasing = false;  // tail moduli increase toward the level
};

}  // namespace

std::string_view to_string(Family f) {
  switch (f) {
    case Family::AnPositive: return "AN_POSITIVE";
    case Family::AnSelfAdjoint: return "AN_SELF_ADJOINT";
    case Family::AnNormal: return "AN_NORMAL";
    case Family::Violator: return "VIOLATOR";
  }
  return "AN_POSITIVE";
}

ANVerdict attainment_oracle(const SpectrumModel& model, const TruncationProfile& profile) {
  const SpectrumModel m = normalize_model(model);
  ANVerdict verdict;
  verdict.modulus_collapsed = m;

  std::vector<double> atoms;
  std::vector<Piece> pieces;
  bool negative = false;
  const auto check_sign = [&](Complex z) {
    if (m.kind == Kind::Positive && z.real() < -kTol) negative = true;
  };

  for (const auto& p : m.points) {
    check_sign(p.value);
    if (p.mult.is_infinite()) {
      pieces.push_back({Piece::Type::Flat, std::abs(p.value)});
    } else {
      atoms.push_back(std::abs(p.value));
    }
  }
  for (const auto& c : m.clusters) {
    check_sign(c.limit);
    const auto deltas = c.deltas.materialize(profile.depth + 1);
    double last = std::abs(c.limit);
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      const Complex z = c.value_at(deltas[i], m.kind);
      check_sign(z);
      last = std::abs(z);
      if (i < profile.depth) atoms.push_back(last);
    }
    const double level = std::abs(c.limit);
    pieces.push_back({Piece::Type::Tail, level, last < level});
  }

  // finite-dimensional: every subset is finite and attains its maximum
  if (pieces.empty()) return verdict;

  std::set<Violation> found;
  if (negative) found.insert(Violation::NegativeValue);

  // Mixed subspaces: unit vectors cos(t_n) u_n + sin(t_n) w_n with u_n, w_n
  // drawn from two infinite pieces at different levels have norms that
  // increase strictly toward the larger level.
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    for (std::size_t j = i + 1; j < pieces.size(); ++j) {
      if (std::abs(pieces[i].level - pieces[j].level) <= kTol) continue;
      const bool fi = pieces[i].type == Piece::Type::Flat;
      const bool fj = pieces[j].type == Piece::Type::Flat;
      if (fi && fj) {
        found.insert(Violation::MultipleInfiniteMultiplicities);
      } else if (!fi && !fj) {
        found.insert(Violation::MultipleLimitPoints);
      } else {
        found.insert(Violation::LimitNeqInfiniteMult);
      }
    }
  }

  // Eigenbasis subsets: atom subset x tail subset.
  const std::size_t n_atoms = std::min(atoms.size(), profile.subset_cap);
  const std::size_t n_pieces = std::min<std::size_t>(pieces.size(), 16);
  const std::size_t atom_masks = std::size_t{1} << n_atoms;
  std::vector<double> atom_sup(atom_masks, -1.0);
  for (std::size_t mask = 1; mask < atom_masks; ++mask) {
    const auto low = static_cast<std::size_t>(std::countr_zero(mask));
    atom_sup[mask] = std::max(atom_sup[mask & (mask - 1)], atoms[low]);
  }

  bool unattained = false;
  for (std::size_t pmask = 0; pmask < (std::size_t{1} << n_pieces) && !unattained; ++pmask) {
    double attained_top = -1.0;
    double open_top = -1.0;  // supremum approached but never reached
    for (std::size_t i = 0; i < n_pieces; ++i) {
      if (!(pmask >> i & 1U)) continue;
      const Piece& p = pieces[i];
      if (p.type == Piece::Type::Tail && p.increasing) {
        open_top = std::max(open_top, p.level);
      } else {
        // flat eigenspaces attain their level; decreasing tails attain their
        // first remaining term, which exceeds the level
        attained_top = std::max(attained_top, p.level);
      }
    }
    if (open_top < 0.0) continue;
    for (std::size_t mask = 0; mask < atom_masks; ++mask) {
      if (std::max(attained_top, atom_sup[mask]) < open_top - kTol) {
        unattained = true;
        break;
      }
    }
  }
  if (unattained) found.insert(Violation::LimitFromBelow);

  verdict.violations.assign(found.begin(), found.end());
  verdict.is_an = verdict.violations.empty();
  return verdict;
}

RankPerturbationResult rank_perturbation_check(std::span<const double> tail_diag, const Matrix& perturbation,
                                               double tol) {
  const std::size_t n = tail_diag.size();
  if (perturbation.rows() != n || perturbation.cols() != n) {
    throw Error(ErrorCode::ShapeMismatch, "perturbation must match the diagonal length");
  }
  std::vector<double> base(tail_diag.begin(), tail_diag.end());
  std::sort(base.begin(), base.end());

  Matrix t = Matrix::diagonal(tail_diag) + perturbation;
  const auto perturbed = hermitian_eigen(t, tol).eigenvalues;
  const auto pe = hermitian_eigen(perturbation, tol).eigenvalues;

  RankPerturbationResult r;
  double pmax = 0.0;
  for (double x : pe) pmax = std::max(pmax, std::abs(x));
  for (double x : pe) {
    if (pmax > 0.0 && std::abs(x) > tol * pmax) ++r.rank;
  }
  if (n == 0) {
    r.passed = true;
    return r;
  }

  const double lo = std::min(base.front(), perturbed.front()) - 1.0;
  const double hi = std::max(base.back(), perturbed.back()) + 1.0;
  for (std::size_t i = 0; i < kCountGrid; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(kCountGrid - 1);
    const auto c0 = std::upper_bound(base.begin(), base.end(), x) - base.begin();
    const auto c1 = std::upper_bound(perturbed.begin(), perturbed.end(), x) - perturbed.begin();
    r.max_count_shift = std::max(r.max_count_shift, static_cast<std::size_t>(std::abs(c1 - c0)));
  }
  r.passed = r.max_count_shift <= r.rank;
  return r;
}

Matrix random_hermitian_of_rank(std::size_t n, std::size_t rank, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Matrix p(n, n);
  for (std::size_t r = 0; r < rank; ++r) {
    std::vector<Complex> v(n);
    for (auto& z : v) z = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    const double w = rng.uniform(-2.0, 2.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) p(i, j) += w * v[i] * std::conj(v[j]);
    }
  }
  return p.hermitian_part();
}

// ---------------------------------------------------------------------------
// Generators. Values sit on a 1/64 grid so the decomposition arithmetic is
// exact in binary.

namespace {

constexpr double kGrid = 64.0;

class ModelBuilder {
 public:
  explicit ModelBuilder(std::uint64_t seed) : rng_(seed) {}

  SplitMix64& rng() { return rng_; }

  double grid(double lo, double hi) {
    const double x = std::round(rng_.uniform(lo, hi) * kGrid) / kGrid;
    return std::clamp(x, lo, hi);
  }

  Multiplicity small_mult() { return Multiplicity::finite(1 + rng_.below(3)); }

  DecaySequence deltas(double max_first) {
    const double first = std::max(1.0 / kGrid, grid(0.0, std::min(1.0, max_first)));
    switch (rng_.below(3)) {
      case 0: {
        static constexpr double ratios[] = {0.25, 0.5, 0.75};
        return DecaySequence::geometric(first, ratios[rng_.below(3)]);
      }
      case 1: return DecaySequence::harmonic(first);
      default: {
        std::vector<double> terms;
        for (int k = 1; k <= 24; ++k) terms.push_back(first / (k * k));
        return DecaySequence::explicit_terms(std::move(terms), true);
      }
    }
  }

  void add_points(SpectrumModel& m, std::size_t max_count, double lo, double hi) {
    const std::size_t count = rng_.below(max_count + 1);
    for (std::size_t i = 0; i < count; ++i) m.points.push_back({grid(lo, hi), small_mult()});
  }

 private:
  SplitMix64 rng_;
};

// Positive AN model in one of the four canonical-triple shapes.
SpectrumModel positive_an(ModelBuilder& b, std::size_t shape) {
  auto& rng = b.rng();
  SpectrumModel m;
  m.kind = Kind::Positive;
  switch (shape) {
    case 0: {  // alpha = 0
      switch (rng.below(3)) {
        case 0:
          b.add_points(m, 3, 1.0 / kGrid, 4.0);
          m.points.push_back({b.grid(1.0 / kGrid, 4.0), b.small_mult()});
          if (rng.coin()) m.points.push_back({0.0, b.small_mult()});
          break;
        case 1:
          m.clusters.push_back({0.0, Side::Above, b.deltas(1.0), std::nullopt});
          b.add_points(m, 3, 1.0 / kGrid, 4.0);
          if (rng.coin()) m.points.push_back({0.0, b.small_mult()});
          break;
        default:
          m.points.push_back({0.0, Multiplicity::infinite()});
          b.add_points(m, 3, 1.0 / kGrid, 4.0);
          if (rng.coin()) m.clusters.push_back({0.0, Side::Above, b.deltas(1.0), std::nullopt});
          break;
      }
      break;
    }
    case 1: {  // F = 0, alpha > 0
      const double a = b.grid(0.5, 3.0);
      const bool cluster = rng.coin();
      if (cluster) m.clusters.push_back({a, Side::Above, b.deltas(1.0), std::nullopt});
      if (!cluster || rng.coin()) {
        m.points.push_back({a, Multiplicity::infinite()});
      } else if (rng.coin()) {
        m.points.push_back({a, b.small_mult()});
      }
      b.add_points(m, 3, a + 1.0 / kGrid, a + 2.0);
      break;
    }
    case 2: {  // K = 0, F != 0
      const double a = b.grid(0.5, 3.0);
      m.points.push_back({a, Multiplicity::infinite()});
      m.points.push_back({b.grid(0.0, a - 1.0 / kGrid), b.small_mult()});
      b.add_points(m, 2, 0.0, a - 1.0 / kGrid);
      break;
    }
    default: {  // K != 0, F != 0
      const double a = b.grid(0.5, 3.0);
      const bool cluster = rng.coin();
      if (cluster) m.clusters.push_back({a, Side::Above, b.deltas(1.0), std::nullopt});
      if (!cluster || rng.coin()) m.points.push_back({a, Multiplicity::infinite()});
      m.points.push_back({b.grid(0.0, a - 1.0 / kGrid), b.small_mult()});
      b.add_points(m, 2, 0.0, a - 1.0 / kGrid);
      m.points.push_back({b.grid(a + 1.0 / kGrid, a + 2.0), b.small_mult()});
      b.add_points(m, 2, a + 1.0 / kGrid, a + 2.0);
      break;
    }
  }
  return m;
}

Complex random_phase(SplitMix64& rng) {
  const double theta = static_cast<double>(1 + rng.below(15)) * std::numbers::pi / 8.0;
  return std::polar(1.0, theta);
}

// Lifts a positive model (read as a modulus spectrum) to a self-adjoint or
// normal model with the same modulus spectrum.
SpectrumModel lift(const SpectrumModel& pos, Kind kind, SplitMix64& rng) {
  if (kind == Kind::Positive) return pos;
  SpectrumModel out;
  out.kind = kind;
  const auto sign = [&]() -> Complex {
    if (kind == Kind::SelfAdjoint) return rng.coin() ? 1.0 : -1.0;
    return random_phase(rng);
  };
  for (const auto& p : pos.points) {
    const double r = p.value.real();
    if (r == 0.0) {
      out.points.push_back(p);
      continue;
    }
    if (p.mult.is_infinite() && rng.below(3) == 0) {
      // split the eigenspace across two signs or phases
      out.points.push_back({r * sign(), p.mult});
      out.points.push_back({r * sign(), p.mult});
    }
    out.points.push_back({r * sign(), p.mult});
  }
  for (const auto& c : pos.clusters) {
    const double r = c.limit.real();
    const Complex s = sign();
    Cluster l;
    l.deltas = c.deltas;
    if (r == 0.0) {
      if (kind == Kind::SelfAdjoint) {
        l.limit = 0.0;
        l.side = s.real() > 0.0 ? Side::Above : Side::Below;
      } else {
        l.limit = 0.0;
        l.side = Side::Above;
        l.direction = s;
      }
    } else if (kind == Kind::SelfAdjoint) {
      l.limit = r * s;
      const bool outward = c.side == Side::Above;
      l.side = (s.real() > 0.0) == outward ? Side::Above : Side::Below;
    } else {
      l.limit = r * s;
      l.side = c.side;
    }
    out.clusters.push_back(std::move(l));
  }
  return out;
}

Kind random_kind(SplitMix64& rng) {
  static constexpr Kind kinds[] = {Kind::Positive, Kind::SelfAdjoint, Kind::Normal};
  return kinds[rng.below(3)];
}

SpectrumModel violator(ModelBuilder& b, Violation code) {
  auto& rng = b.rng();
  SpectrumModel m;
  m.kind = Kind::Positive;
  switch (code) {
    case Violation::NegativeValue: {
      SpectrumModel base = positive_an(b, rng.coin() ? 1 : 3);
      base.points.push_back({-b.grid(1.0 / kGrid, 2.0), b.small_mult()});
      return base;
    }
    case Violation::MultipleLimitPoints: {
      const double r1 = b.grid(0.0, 2.0);
      const double r2 = r1 + b.grid(0.125, 2.0);
      m.clusters.push_back({r1, Side::Above, b.deltas(1.0), std::nullopt});
      m.clusters.push_back({r2, Side::Above, b.deltas(1.0), std::nullopt});
      break;
    }
    case Violation::LimitFromBelow: {
      const double r = b.grid(0.5, 3.0);
      m.clusters.push_back({r, Side::Below, b.deltas(r), std::nullopt});
      if (rng.coin()) m.points.push_back({r, Multiplicity::infinite()});
      break;
    }
    case Violation::MultipleInfiniteMultiplicities: {
      const double r1 = b.grid(0.0, 2.0);
      const double r2 = r1 + b.grid(0.125, 2.0);
      m.points.push_back({r1, Multiplicity::infinite()});
      m.points.push_back({r2, Multiplicity::infinite()});
      break;
    }
    case Violation::LimitNeqInfiniteMult: {
      const double r1 = b.grid(0.0, 3.0);
      double r2 = b.grid(0.0, 3.0);
      if (std::abs(r2 - r1) < 0.125) r2 = r1 + 0.5;
      m.clusters.push_back({r1, Side::Above, b.deltas(1.0), std::nullopt});
      m.points.push_back({r2, Multiplicity::infinite()});
      break;
    }
  }
  b.add_points(m, 3, 0.0, 4.0);
  return lift(m, random_kind(rng), rng);
}

}  // namespace

SpectrumModel generate_model(const GeneratorProfile& profile) {
  const std::uint64_t salt = 0x5eed0000ULL + static_cast<std::uint64_t>(profile.family) * 0x100 +
                             (profile.code ? static_cast<std::uint64_t>(*profile.code) : 0);
  ModelBuilder b(profile.seed * 0x9e3779b97f4a7c15ULL ^ salt);
  auto& rng = b.rng();
  switch (profile.family) {
    case Family::AnPositive: return positive_an(b, rng.below(4));
    case Family::AnSelfAdjoint: return lift(positive_an(b, rng.below(4)), Kind::SelfAdjoint, rng);
    case Family::AnNormal: return lift(positive_an(b, rng.below(4)), Kind::Normal, rng);
    case Family::Violator:
      if (!profile.code) throw Error(ErrorCode::Malformed, "violator family needs a violation code");
      return violator(b, *profile.code);
  }
  return {};
}

GeneratorProfile profile_for_trial(std::uint64_t seed) {
  static constexpr Violation codes[] = {Violation::NegativeValue, Violation::MultipleLimitPoints,
                                        Violation::LimitFromBelow, Violation::MultipleInfiniteMultiplicities,
                                        Violation::LimitNeqInfiniteMult};
  const std::uint64_t slot = seed % 8;
  switch (slot) {
    case 0: return {seed, Family::AnPositive, std::nullopt};
    case 1: return {seed, Family::AnSelfAdjoint, std::nullopt};
    case 2: return {seed, Family::AnNormal, std::nullopt};
    default: return {seed, Family::Violator, codes[slot - 3]};
  }
}

}  // namespace anop

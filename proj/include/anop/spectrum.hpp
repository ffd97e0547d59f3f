#pragma once

// Finitely-presented countable spectra of diagonalizable operators and the
// absolutely-norm-attaining (AN) classifier.
//
// A SpectrumModel lists finitely many eigenvalues ("points", each with a
// finite or infinite multiplicity) plus finitely many clusters. A cluster is
// a symbolic sequence of simple eigenvalues limit + side * delta_n * axis
// where delta_n decreases to zero. Real kinds use the real axis, so ABOVE and
// BELOW mean numerically larger and smaller. Normal clusters default to the
// radial axis limit/|limit|, so ABOVE and BELOW mean larger and smaller
// modulus; an explicit axis may be given instead.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "anop/error.hpp"

namespace anop {

using Complex = std::complex<double>;

/// Two spectral values closer than this are the same spectral point.
inline constexpr double kMergeTolerance = 1e-9;

/// Number of terms materialized when a nonlinear map is pushed through a
/// cluster (squares, Gram spectra, inverses).
inline constexpr std::size_t kDefaultMapDepth = 64;

class Multiplicity {
 public:
  constexpr Multiplicity() = default;

  static constexpr Multiplicity finite(std::uint64_t n) { return Multiplicity(n, false); }
  static constexpr Multiplicity infinite() { return Multiplicity(0, true); }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr bool is_zero() const { return !infinite_ && count_ == 0; }
  /// Meaningless when is_infinite().
  constexpr std::uint64_t count() const { return count_; }

  constexpr Multiplicity operator+(Multiplicity other) const {
    if (infinite_ || other.infinite_) return infinite();
    return finite(count_ + other.count_);
  }
  constexpr Multiplicity& operator+=(Multiplicity other) { return *this = *this + other; }

  friend constexpr bool operator==(const Multiplicity&, const Multiplicity&) = default;

 private:
  constexpr Multiplicity(std::uint64_t n, bool inf) : count_(inf ? 0 : n), infinite_(inf) {}

  std::uint64_t count_ = 0;
  bool infinite_ = false;
};

/// Positive sequence decreasing to zero. Explicit lists terminate unless
/// flagged with an infinite tail, in which case they are a materialized
/// prefix of a non-terminating sequence. Union merges several sequences into
/// one non-increasing stream (equal terms from different parts are kept).
class DecaySequence {
 public:
  enum class Form { Explicit, Geometric, Harmonic, Union };

  static DecaySequence explicit_terms(std::vector<double> terms, bool infinite_tail = false);
  static DecaySequence geometric(double first, double ratio);
  static DecaySequence harmonic(double scale);
  static DecaySequence merged(std::vector<DecaySequence> parts);

  Form form() const { return form_; }
  const std::vector<double>& terms() const { return terms_; }
  bool infinite_tail() const { return infinite_tail_; }
  double first_param() const { return a_; }
  double ratio() const { return b_; }
  const std::vector<DecaySequence>& parts() const { return parts_; }

  /// Throws Error(Malformed) if the sequence is not positive, strictly
  /// decreasing, and convergent to zero.
  void validate() const;

  bool terminates() const;
  /// Number of terms of a terminating sequence.
  std::size_t length() const;
  /// Largest term.
  double first() const;
  /// Smallest term of a terminating sequence.
  double last() const;

  /// Up to n leading terms, non-increasing. Fewer when the sequence
  /// terminates or only a finite prefix is known.
  std::vector<double> materialize(std::size_t n) const;

  /// Termwise image under f, materialized as explicit terms at the given
  /// depth. f must be strictly increasing with f(0+) = 0. Union parts are
  /// mapped individually.
  DecaySequence map(const std::function<double(double)>& f,
                    std::size_t depth = kDefaultMapDepth) const;

  friend bool operator==(const DecaySequence&, const DecaySequence&) = default;

 private:
  DecaySequence() = default;

  Form form_ = Form::Explicit;
  std::vector<double> terms_;
  bool infinite_tail_ = false;
  double a_ = 0.0;
  double b_ = 0.0;
  std::vector<DecaySequence> parts_;
};

enum class Kind { Positive, SelfAdjoint, Normal };
enum class Side { Above, Below };

std::string_view to_string(Kind kind);
std::string_view to_string(Side side);

struct EigenvalueEntry {
  Complex value;
  Multiplicity mult = Multiplicity::finite(1);
};

struct Cluster {
  Complex limit;
  Side side = Side::Above;
  DecaySequence deltas = DecaySequence::harmonic(1.0);
  /// Unit approach axis, NORMAL kind only. Empty means radial.
  std::optional<Complex> direction;

  Complex axis(Kind kind) const;
  Complex value_at(double delta, Kind kind) const;
};

struct SpectrumModel {
  Kind kind = Kind::Positive;
  std::vector<EigenvalueEntry> points;
  std::vector<Cluster> clusters;

  /// Hilbert-space dimension of the diagonal model.
  Multiplicity dimension() const;
  bool infinite_dimensional() const { return dimension().is_infinite(); }
};

enum class Violation {
  NegativeValue,
  MultipleLimitPoints,
  LimitFromBelow,
  MultipleInfiniteMultiplicities,
  LimitNeqInfiniteMult,
};

std::string_view to_string(Violation v);

struct ANVerdict {
  bool is_an = true;
  std::vector<Violation> violations;
  SpectrumModel modulus_collapsed;
};

struct ModuliReport {
  double operator_norm = 0.0;
  double min_modulus = 0.0;
  double essential_min_modulus = 0.0;
  bool norm_attained = false;
  bool finite_dim = false;
};

/// Validates the presentation, merges coincident points, merges clusters
/// with equal limit, side and axis, expands terminating clusters into points
/// and sorts everything. Idempotent.
SpectrumModel normalize_model(const SpectrumModel& model);

/// Spectrum of |T| as a POSITIVE model.
SpectrumModel modulus_spectrum(const SpectrumModel& model);

ANVerdict classify(const SpectrumModel& model);

ModuliReport moduli_report(const SpectrumModel& model);

/// Value-level comparison: same kind, points within tol (relative to
/// max(1,|value|)), equal multiplicities, clusters with matching limit, side,
/// axis and materialized deltas at the given depth.
bool models_equal(const SpectrumModel& a, const SpectrumModel& b, double tol,
                  std::size_t depth = kDefaultMapDepth);

/// Unit phase of z, or 1 for z = 0.
Complex unit_phase(Complex z);

}  // namespace anop

#include "anop/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace anop {

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

bool same_value(double a, double b) { return std::abs(a - b) <= kMergeTolerance; }

bool has_cluster(const SpectrumModel& k) { return !k.clusters.empty(); }

std::vector<FEntry> merged_f(std::vector<FEntry> f) {
  std::sort(f.begin(), f.end(), [](const FEntry& a, const FEntry& b) { return a.value < b.value; });
  std::vector<FEntry> out;
  for (const auto& e : f) {
    if (!out.empty() && same_value(out.back().value, e.value)) {
      out.back().mult += e.mult;
    } else {
      out.push_back(e);
    }
  }
  return out;
}

// Applies g pointwise to K (points and cluster offsets) and h to F.
template <class G, class H>
PositiveTriple map_triple(const PositiveTriple& t, double alpha, G g, H h, std::size_t depth) {
  PositiveTriple out;
  out.alpha = alpha;
  out.identity = t.identity;
  out.k.kind = Kind::Positive;
  for (const auto& p : t.k.points) out.k.points.push_back({g(p.value.real()), p.mult});
  for (const auto& c : t.k.clusters) {
    out.k.clusters.push_back({0.0, Side::Above, c.deltas.map(g, depth), std::nullopt});
  }
  for (const auto& e : t.f) out.f.push_back({h(e.value), e.mult});
  return canonical_triple(out);
}

StructuredDecomposition structure_impl(const SpectrumModel& model, Kind expected) {
  const SpectrumModel n = normalize_model(model);
  if (n.kind != expected) {
    fail(ErrorCode::WrongKind, std::string("expected a ") + std::string(to_string(expected)) + " model");
  }
  if (!classify(n).is_an) fail(ErrorCode::NotAn, "model is not absolutely norm attaining");

  const PositiveTriple modulus = decompose_positive(modulus_spectrum(n));
  StructuredDecomposition sd;
  sd.kind = expected;
  sd.alpha = modulus.alpha;
  const double alpha = sd.alpha;

  const auto phase_of = [&](Complex z) -> Complex {
    if (expected == Kind::SelfAdjoint) return {z.real() > 0.0 ? 1.0 : -1.0, 0.0};
    return unit_phase(z);
  };

  for (const auto& p : n.points) {
    const double r = std::abs(p.value);
    if (r <= kMergeTolerance) {
      sd.kernel += p.mult;
      continue;
    }
    Block b;
    b.phase = phase_of(p.value);
    b.mult = p.mult;
    if (same_value(r, alpha)) {
      b.part = BlockPart::Identity;
    } else if (r > alpha) {
      b.part = BlockPart::K;
      b.value = r - alpha;
    } else {
      b.part = BlockPart::F;
      b.value = alpha - r;
    }
    sd.support.push_back(b);
  }

  for (const auto& c : n.clusters) {
    Block b;
    b.part = BlockPart::KCluster;
    b.mult = Multiplicity::infinite();
    b.deltas = c.deltas;
    if (std::abs(c.limit) <= kMergeTolerance) {
      // values side*delta*axis share one phase
      const double s = c.side == Side::Above ? 1.0 : -1.0;
      b.phase = phase_of(s * c.axis(n.kind));
    } else {
      const Complex ph = unit_phase(c.limit);
      const Complex rel = std::conj(ph) * c.axis(n.kind);
      if (std::abs(rel.imag()) > 1e-12) {
        fail(ErrorCode::Malformed, "structured decomposition requires clusters approaching their limit radially");
      }
      b.phase = phase_of(c.limit);
    }
    sd.support.push_back(std::move(b));
  }
  return sd;
}

}  // namespace

std::string_view to_string(UniquenessCase c) {
  switch (c) {
    case UniquenessCase::AlphaZero: return "alpha_zero";
    case UniquenessCase::FZero: return "f_zero";
    case UniquenessCase::KZero: return "k_zero";
    case UniquenessCase::KAndF: return "k_and_f";
  }
  return "alpha_zero";
}

std::string_view to_string(BlockPart p) {
  switch (p) {
    case BlockPart::Identity: return "identity";
    case BlockPart::K: return "k";
    case BlockPart::F: return "f";
    case BlockPart::KCluster: return "k_cluster";
  }
  return "identity";
}

void validate_triple(const PositiveTriple& t) {
  if (!std::isfinite(t.alpha) || t.alpha < 0.0) fail(ErrorCode::Malformed, "alpha must be finite and >= 0");
  if (t.k.kind != Kind::Positive) fail(ErrorCode::Malformed, "K must be a positive model");
  for (const auto& p : t.k.points) {
    if (p.mult.is_zero() || p.mult.is_infinite()) fail(ErrorCode::Malformed, "K eigenvalues need finite multiplicity");
    if (!(p.value.real() > kMergeTolerance) || std::abs(p.value.imag()) > 0.0) {
      fail(ErrorCode::Malformed, "K eigenvalues must be strictly positive");
    }
  }
  for (const auto& c : t.k.clusters) {
    c.deltas.validate();
    if (std::abs(c.limit) > kMergeTolerance || c.side != Side::Above || c.direction) {
      fail(ErrorCode::Malformed, "K clusters must accumulate at 0 from above");
    }
  }
  if (t.k.clusters.size() > 1) fail(ErrorCode::Malformed, "K carries at most one cluster");
  for (const auto& e : t.f) {
    if (e.mult.is_zero() || e.mult.is_infinite()) fail(ErrorCode::Malformed, "F is finite rank");
    if (!(e.value > 0.0) || e.value > t.alpha + kMergeTolerance) {
      fail(ErrorCode::Malformed, "F eigenvalues must lie in (0, alpha]");
    }
  }
  if (t.alpha == 0.0 && !t.f.empty()) fail(ErrorCode::Malformed, "alpha = 0 forces F = 0");
  const bool infinite = t.identity.is_infinite() ||
                        std::any_of(t.k.clusters.begin(), t.k.clusters.end(),
                                    [](const Cluster& c) { return !c.deltas.terminates(); });
  if (t.alpha > 0.0 && !infinite) {
    fail(ErrorCode::Malformed, "alpha > 0 needs an infinite-dimensional space (identity 'inf' or a K cluster)");
  }
}

PositiveTriple canonical_triple(const PositiveTriple& t) {
  PositiveTriple out = t;
  bool empty_k = t.k.points.empty() && t.k.clusters.empty();
  if (!empty_k) out.k = normalize_model(t.k);
  out.k.kind = Kind::Positive;
  out.f = merged_f(t.f);
  validate_triple(out);
  return out;
}

bool triples_equal(const PositiveTriple& a, const PositiveTriple& b, double tol, std::size_t depth) {
  const auto near = [tol](double x, double y) { return std::abs(x - y) <= tol * std::max(1.0, std::max(x, y)); };
  if (!near(a.alpha, b.alpha) || a.identity != b.identity || a.f.size() != b.f.size()) return false;
  for (std::size_t i = 0; i < a.f.size(); ++i) {
    if (!near(a.f[i].value, b.f[i].value) || a.f[i].mult != b.f[i].mult) return false;
  }
  const bool ea = a.k.points.empty() && a.k.clusters.empty();
  const bool eb = b.k.points.empty() && b.k.clusters.empty();
  if (ea || eb) return ea == eb;
  return models_equal(a.k, b.k, tol, depth);
}

UniquenessCase uniqueness_case(const PositiveTriple& t) {
  if (t.alpha == 0.0) return UniquenessCase::AlphaZero;
  if (t.f.empty()) return UniquenessCase::FZero;
  if (t.k.points.empty() && t.k.clusters.empty()) return UniquenessCase::KZero;
  return UniquenessCase::KAndF;
}

PositiveTriple decompose_positive(const SpectrumModel& model) {
  const SpectrumModel n = normalize_model(model);
  if (n.kind != Kind::Positive) fail(ErrorCode::WrongKind, "decompose_positive expects a positive model");
  for (const auto& p : n.points) {
    if (p.value.real() < -kMergeTolerance) fail(ErrorCode::NegativeValue, "positive model has a negative eigenvalue");
  }
  const ANVerdict verdict = classify(n);
  if (!verdict.is_an) {
    const bool negative = std::find(verdict.violations.begin(), verdict.violations.end(),
                                    Violation::NegativeValue) != verdict.violations.end();
    fail(negative ? ErrorCode::NegativeValue : ErrorCode::NotAn, "model is not absolutely norm attaining");
  }

  PositiveTriple t;
  t.k.kind = Kind::Positive;
  if (n.infinite_dimensional()) {
    if (!n.clusters.empty()) {
      t.alpha = n.clusters.front().limit.real();
    } else {
      for (const auto& p : n.points) {
        if (p.mult.is_infinite()) t.alpha = p.value.real();
      }
    }
  }
  const double alpha = t.alpha;

  for (const auto& p : n.points) {
    const double v = p.value.real();
    if (same_value(v, alpha)) {
      t.identity += p.mult;
    } else if (v > alpha) {
      t.k.points.push_back({v - alpha, p.mult});
    } else {
      t.f.push_back({alpha - v, p.mult});
    }
  }
  for (const auto& c : n.clusters) {
    t.k.clusters.push_back({0.0, Side::Above, c.deltas, std::nullopt});
  }
  return canonical_triple(t);
}

SpectrumModel recompose(const PositiveTriple& t) {
  validate_triple(t);
  SpectrumModel m;
  m.kind = Kind::Positive;
  for (const auto& p : t.k.points) m.points.push_back({t.alpha + p.value.real(), p.mult});
  for (const auto& e : t.f) m.points.push_back({t.alpha - e.value, e.mult});
  if (!t.identity.is_zero()) m.points.push_back({t.alpha, t.identity});
  for (const auto& c : t.k.clusters) m.clusters.push_back({t.alpha, Side::Above, c.deltas, std::nullopt});
  return normalize_model(m);
}

PositiveTriple square_triple(const PositiveTriple& t, std::size_t depth) {
  validate_triple(t);
  const double a = t.alpha;
  return map_triple(
      t, a * a, [a](double k) { return k * (k + 2.0 * a); }, [a](double f) { return f * (2.0 * a - f); }, depth);
}

PositiveTriple sqrt_triple(const PositiveTriple& t, std::size_t depth) {
  validate_triple(t);
  const double a = t.alpha;
  const double s = std::sqrt(a);
  // rationalized forms of sqrt(a + k) - sqrt(a) and sqrt(a) - sqrt(a - f)
  return map_triple(
      t, s, [a, s](double k) { return k / (std::sqrt(a + k) + s); },
      [a, s](double f) { return f / (s + std::sqrt(std::max(0.0, a - f))); }, depth);
}

AMForm invert_triple(const PositiveTriple& t, std::size_t depth) {
  validate_triple(t);
  const double a = t.alpha;
  if (!(a > kMergeTolerance)) fail(ErrorCode::AlphaZero, "alpha = 0: T is compact and not boundedly invertible");
  for (const auto& e : t.f) {
    if (e.value >= a - kMergeTolerance) fail(ErrorCode::NotInjective, "an F eigenvalue equals alpha, so T has a kernel");
  }
  if (!t.identity.is_zero() && a == 0.0) fail(ErrorCode::NotInjective, "zero eigenvalue");

  AMForm am;
  am.beta = 1.0 / a;
  am.identity = t.identity;
  am.k1.kind = Kind::Positive;
  const auto k_map = [a](double k) { return k / (a * (k + a)); };
  for (const auto& p : t.k.points) am.k1.points.push_back({k_map(p.value.real()), p.mult});
  for (const auto& c : t.k.clusters) {
    am.k1.clusters.push_back({0.0, Side::Above, c.deltas.map(k_map, depth), std::nullopt});
  }
  for (const auto& e : t.f) am.f1.push_back({e.value / (a * (a - e.value)), e.mult});
  return am;
}

SpectrumModel am_spectrum(const AMForm& am) {
  SpectrumModel m;
  m.kind = Kind::Positive;
  for (const auto& p : am.k1.points) m.points.push_back({am.beta - p.value.real(), p.mult});
  for (const auto& e : am.f1) m.points.push_back({am.beta + e.value, e.mult});
  if (!am.identity.is_zero()) m.points.push_back({am.beta, am.identity});
  for (const auto& c : am.k1.clusters) m.clusters.push_back({am.beta, Side::Below, c.deltas, std::nullopt});
  return normalize_model(m);
}

StructuredDecomposition structure_selfadjoint(const SpectrumModel& model) {
  return structure_impl(model, Kind::SelfAdjoint);
}

StructuredDecomposition structure_normal(const SpectrumModel& model) {
  return structure_impl(model, Kind::Normal);
}

SpectrumModel recombine(const StructuredDecomposition& sd) {
  SpectrumModel m;
  m.kind = sd.kind;
  const double a = sd.alpha;
  for (const auto& b : sd.support) {
    switch (b.part) {
      case BlockPart::Identity: m.points.push_back({b.phase * a, b.mult}); break;
      case BlockPart::K: m.points.push_back({b.phase * (a + b.value), b.mult}); break;
      case BlockPart::F: m.points.push_back({b.phase * (a - b.value), b.mult}); break;
      case BlockPart::KCluster: {
        if (!b.deltas) fail(ErrorCode::Malformed, "k_cluster block without deltas");
        Cluster c;
        c.limit = b.phase * a;
        c.deltas = *b.deltas;
        if (sd.kind == Kind::Normal) {
          c.side = Side::Above;
          if (a == 0.0) c.direction = b.phase;
        } else {
          c.side = b.phase.real() > 0.0 ? Side::Above : Side::Below;
        }
        m.clusters.push_back(std::move(c));
        break;
      }
    }
  }
  if (!sd.kernel.is_zero()) m.points.push_back({0.0, sd.kernel});
  return normalize_model(m);
}

SpectrumModel gram_spectrum(const SpectrumModel& model, std::size_t depth) {
  const SpectrumModel m = modulus_spectrum(model);
  SpectrumModel g;
  g.kind = Kind::Positive;
  // |z|^2 straight from the values; squaring |z| loses an ulp
  for (const auto& p : normalize_model(model).points) g.points.push_back({std::norm(p.value), p.mult});
  for (const auto& c : m.clusters) {
    const double l = c.limit.real();
    Cluster out;
    out.limit = l * l;
    out.side = c.side;
    if (c.side == Side::Above) {
      out.deltas = c.deltas.map([l](double d) { return d * (d + 2.0 * l); }, depth);
    } else {
      out.deltas = c.deltas.map([l](double d) { return d * (2.0 * l - d); }, depth);
    }
    g.clusters.push_back(std::move(out));
  }
  return normalize_model(g);
}

SpectrumModel adjoint_spectrum(const SpectrumModel& model) {
  SpectrumModel n = normalize_model(model);
  if (n.kind == Kind::Positive) return n;
  for (auto& p : n.points) p.value = std::conj(p.value);
  for (auto& c : n.clusters) {
    c.limit = std::conj(c.limit);
    if (c.direction) c.direction = std::conj(*c.direction);
  }
  return normalize_model(n);
}

SpectrumModel imaginary_shift(const SpectrumModel& model, double lambda) {
  const SpectrumModel n = normalize_model(model);
  if (n.kind != Kind::SelfAdjoint) fail(ErrorCode::WrongKind, "imaginary_shift expects a self-adjoint model");
  if (!classify(n).is_an) fail(ErrorCode::NotAn, "model is not absolutely norm attaining");
  SpectrumModel out;
  out.kind = Kind::Normal;
  const Complex shift(0.0, lambda);
  for (const auto& p : n.points) out.points.push_back({p.value + shift, p.mult});
  for (const auto& c : n.clusters) {
    Cluster s = c;
    s.limit = c.limit + shift;
    s.direction = Complex(1.0, 0.0);
    out.clusters.push_back(std::move(s));
  }
  return normalize_model(out);
}

FredholmReport fredholm_report(const PositiveTriple& t) {
  validate_triple(t);
  FredholmReport r;
  r.essential_min_modulus = t.alpha;
  if (t.alpha > 0.0) {
    for (const auto& e : t.f) {
      if (same_value(e.value, t.alpha)) r.kernel_dimension += e.mult;
    }
    r.range_closed = true;
    r.is_fredholm = true;
  } else {
    // T = K: the kernel is the zero-eigenvalue (identity) part
    r.kernel_dimension = t.identity;
    const bool finite_rank = !has_cluster(t.k);
    r.range_closed = finite_rank;
    r.is_fredholm = finite_rank && !t.identity.is_infinite();
  }
  r.is_injective = r.kernel_dimension.is_zero();
  r.index = 0;
  r.is_left_semi_fredholm = r.is_fredholm;
  return r;
}

}  // namespace anop

#include "anop/spectrum.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <string>
#include <tuple>
#include <utility>

namespace anop {

namespace {

constexpr double kAxisTolerance = 1e-12;

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::Malformed, what);
}

bool is_real_kind(Kind kind) { return kind != Kind::Normal; }

double side_sign(Side side) { return side == Side::Above ? 1.0 : -1.0; }

bool lex_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

bool close(Complex a, Complex b) { return std::abs(a - b) <= kMergeTolerance; }

// Modulus-side image of one cluster: |limit| approached from above or below
// with the given offsets.
struct ModulusCluster {
  double limit;
  Side side;
  DecaySequence deltas;
};

constexpr double kUnderflowOffset = 1e-280;

ModulusCluster cluster_modulus(const Cluster& c, Kind kind) {
  const double r = std::abs(c.limit);
  if (r <= kMergeTolerance) return {0.0, Side::Above, c.deltas};

  const Complex phase = c.limit / r;
  const Complex rel = std::conj(phase) * c.axis(kind);
  const double s = side_sign(c.side);
  if (std::abs(rel.imag()) <= kAxisTolerance) {
    if (s * rel.real() > 0.0) return {r, Side::Above, c.deltas};
    if (c.deltas.first() > r + kMergeTolerance) {
      malformed("cluster approaching its limit toward zero must satisfy first delta <= |limit|");
    }
    return {r, Side::Below, c.deltas};
  }

  // Off-axis approach: offsets |value_n| - r must keep one sign and shrink.
  // |z| - r = (|z|^2 - r^2) / (|z| + r) avoids the cancellation that turns
  // near-tangential offsets (~ delta^2 / 2r) into zeros.
  const double radial = s * rel.real() * r;
  const auto ds = c.deltas.materialize(kDefaultMapDepth);
  std::vector<double> offsets;
  offsets.reserve(ds.size());
  int sign = 0;
  for (double d : ds) {
    const double o = d * (2.0 * radial + d) / (std::abs(c.value_at(d, kind)) + r);
    const double mag = std::abs(o);
    if (mag < kUnderflowOffset) break;  // rest of the prefix is numerically zero
    const int sg = o > 0.0 ? 1 : -1;
    if (sign != 0 && sg != sign) {
      malformed("off-axis cluster must approach its limit modulus monotonically from one side");
    }
    sign = sg;
    if (!offsets.empty() && !(mag < offsets.back())) {
      malformed("off-axis cluster moduli are not strictly monotone");
    }
    offsets.push_back(mag);
  }
  if (offsets.empty()) malformed("off-axis cluster offsets vanish numerically");
  return {r, sign > 0 ? Side::Above : Side::Below,
          DecaySequence::explicit_terms(std::move(offsets), !c.deltas.terminates())};
}

void append_flattened(std::vector<DecaySequence>& out, const DecaySequence& seq) {
  if (seq.form() == DecaySequence::Form::Union) {
    for (const auto& p : seq.parts()) append_flattened(out, p);
  } else {
    out.push_back(seq);
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// DecaySequence

DecaySequence DecaySequence::explicit_terms(std::vector<double> terms, bool infinite_tail) {
  DecaySequence s;
  s.form_ = Form::Explicit;
  s.terms_ = std::move(terms);
  s.infinite_tail_ = infinite_tail;
  return s;
}

DecaySequence DecaySequence::geometric(double first, double ratio) {
  DecaySequence s;
  s.form_ = Form::Geometric;
  s.a_ = first;
  s.b_ = ratio;
  return s;
}

DecaySequence DecaySequence::harmonic(double scale) {
  DecaySequence s;
  s.form_ = Form::Harmonic;
  s.a_ = scale;
  return s;
}

DecaySequence DecaySequence::merged(std::vector<DecaySequence> parts) {
  std::vector<DecaySequence> flat;
  for (const auto& p : parts) append_flattened(flat, p);
  if (flat.size() == 1) return flat.front();
  DecaySequence s;
  s.form_ = Form::Union;
  s.parts_ = std::move(flat);
  return s;
}

void DecaySequence::validate() const {
  switch (form_) {
    case Form::Explicit:
      if (terms_.empty()) malformed("explicit decay sequence has no terms");
      for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (!std::isfinite(terms_[i]) || terms_[i] <= 0.0) {
          malformed("decay terms must be finite and strictly positive");
        }
        if (i > 0 && !(terms_[i] < terms_[i - 1])) {
          malformed("decay terms must be strictly decreasing");
        }
      }
      return;
    case Form::Geometric:
      if (!std::isfinite(a_) || a_ <= 0.0) malformed("geometric first term must be > 0");
      if (!(b_ > 0.0 && b_ < 1.0)) malformed("geometric ratio must lie in (0,1)");
      return;
    case Form::Harmonic:
      if (!std::isfinite(a_) || a_ <= 0.0) malformed("harmonic scale must be > 0");
      return;
    case Form::Union:
      if (parts_.empty()) malformed("union decay sequence has no parts");
      for (const auto& p : parts_) p.validate();
      return;
  }
}

bool DecaySequence::terminates() const {
  switch (form_) {
    case Form::Explicit: return !infinite_tail_;
    case Form::Geometric:
    case Form::Harmonic: return false;
    case Form::Union:
      return std::all_of(parts_.begin(), parts_.end(),
                         [](const DecaySequence& p) { return p.terminates(); });
  }
  return false;
}

std::size_t DecaySequence::length() const {
  if (form_ == Form::Explicit) return terms_.size();
  std::size_t n = 0;
  for (const auto& p : parts_) n += p.length();
  return n;
}

double DecaySequence::first() const {
  switch (form_) {
    case Form::Explicit: return terms_.empty() ? 0.0 : terms_.front();
    case Form::Geometric:
    case Form::Harmonic: return a_;
    case Form::Union: {
      double m = 0.0;
      for (const auto& p : parts_) m = std::max(m, p.first());
      return m;
    }
  }
  return 0.0;
}

double DecaySequence::last() const {
  if (form_ == Form::Explicit) return terms_.empty() ? 0.0 : terms_.back();
  double m = first();
  for (const auto& p : parts_) m = std::min(m, p.last());
  return m;
}

std::vector<double> DecaySequence::materialize(std::size_t n) const {
  std::vector<double> out;
  switch (form_) {
    case Form::Explicit:
      out.assign(terms_.begin(), terms_.begin() + static_cast<std::ptrdiff_t>(std::min(n, terms_.size())));
      break;
    case Form::Geometric: {
      double t = a_;
      for (std::size_t k = 0; k < n && t >= 1e-300; ++k, t *= b_) out.push_back(t);
      break;
    }
    case Form::Harmonic:
      for (std::size_t k = 1; k <= n; ++k) out.push_back(a_ / static_cast<double>(k));
      break;
    case Form::Union: {
      for (const auto& p : parts_) {
        auto m = p.materialize(n);
        out.insert(out.end(), m.begin(), m.end());
      }
      std::sort(out.begin(), out.end(), std::greater<>());
      if (out.size() > n) out.resize(n);
      break;
    }
  }
  return out;
}

DecaySequence DecaySequence::map(const std::function<double(double)>& f, std::size_t depth) const {
  if (form_ == Form::Union) {
    std::vector<DecaySequence> mapped;
    mapped.reserve(parts_.size());
    for (const auto& p : parts_) mapped.push_back(p.map(f, depth));
    return merged(std::move(mapped));
  }
  const bool finite = terminates();
  std::vector<double> ts;
  for (double t : materialize(finite ? length() : depth)) {
    const double y = f(t);
    // a prefix may stop early once the image underflows
    if (!finite && (!(y > 0.0) || (!ts.empty() && !(y < ts.back())))) break;
    ts.push_back(y);
  }
  return explicit_terms(std::move(ts), !finite);
}

// ---------------------------------------------------------------------------
// Names

std::string_view to_string(Kind kind) {
  switch (kind) {
    case Kind::Positive: return "positive";
    case Kind::SelfAdjoint: return "selfadjoint";
    case Kind::Normal: return "normal";
  }
  return "positive";
}

std::string_view to_string(Side side) { return side == Side::Above ? "above" : "below"; }

std::string_view to_string(Violation v) {
  switch (v) {
    case Violation::NegativeValue: return "NEGATIVE_VALUE";
    case Violation::MultipleLimitPoints: return "MULTIPLE_LIMIT_POINTS";
    case Violation::LimitFromBelow: return "LIMIT_FROM_BELOW";
    case Violation::MultipleInfiniteMultiplicities: return "MULTIPLE_INFINITE_MULTIPLICITIES";
    case Violation::LimitNeqInfiniteMult: return "LIMIT_NEQ_INFINITE_MULT";
  }
  return "UNKNOWN";
}

Complex unit_phase(Complex z) {
  const double r = std::abs(z);
  return r == 0.0 ? Complex(1.0, 0.0) : z / r;
}

// ---------------------------------------------------------------------------
// Model

Complex Cluster::axis(Kind kind) const {
  if (is_real_kind(kind)) return {1.0, 0.0};
  return direction ? *direction : unit_phase(limit);
}

Complex Cluster::value_at(double delta, Kind kind) const {
  return limit + side_sign(side) * delta * axis(kind);
}

Multiplicity SpectrumModel::dimension() const {
  Multiplicity total;
  for (const auto& p : points) total += p.mult;
  for (const auto& c : clusters) {
    total += c.deltas.terminates() ? Multiplicity::finite(c.deltas.length())
                                   : Multiplicity::infinite();
  }
  return total;
}

SpectrumModel normalize_model(const SpectrumModel& model) {
  SpectrumModel out;
  out.kind = model.kind;
  const bool real = is_real_kind(model.kind);

  std::vector<EigenvalueEntry> raw;
  raw.reserve(model.points.size());
  for (auto p : model.points) {
    if (p.mult.is_zero()) malformed("eigenvalue multiplicity must be >= 1");
    if (!std::isfinite(p.value.real()) || !std::isfinite(p.value.imag())) {
      malformed("eigenvalue must be finite");
    }
    if (real) {
      if (std::abs(p.value.imag()) > kMergeTolerance) malformed("real kind requires real eigenvalues");
      p.value = {p.value.real(), 0.0};
    }
    raw.push_back(p);
  }

  std::vector<Cluster> clusters;
  for (auto c : model.clusters) {
    c.deltas.validate();
    if (!std::isfinite(c.limit.real()) || !std::isfinite(c.limit.imag())) {
      malformed("cluster limit must be finite");
    }
    if (real) {
      if (std::abs(c.limit.imag()) > kMergeTolerance) malformed("real kind requires real cluster limits");
      if (c.direction) malformed("cluster direction is only meaningful for normal kind");
      c.limit = {c.limit.real(), 0.0};
    } else if (c.direction) {
      const double n = std::abs(*c.direction);
      if (!(n > 0.0) || !std::isfinite(n)) malformed("cluster direction must be a nonzero vector");
      const Complex u = *c.direction / n;
      c.direction = std::abs(u - unit_phase(c.limit)) <= kAxisTolerance ? std::nullopt
                                                                         : std::optional<Complex>(u);
    }
    (void)cluster_modulus(c, model.kind);

    if (c.deltas.terminates()) {
      for (double d : c.deltas.materialize(c.deltas.length())) {
        raw.push_back({c.value_at(d, model.kind), Multiplicity::finite(1)});
      }
    } else {
      clusters.push_back(std::move(c));
    }
  }

  std::stable_sort(raw.begin(), raw.end(),
                   [](const EigenvalueEntry& a, const EigenvalueEntry& b) { return lex_less(a.value, b.value); });
  for (const auto& p : raw) {
    auto it = std::find_if(out.points.begin(), out.points.end(),
                           [&](const EigenvalueEntry& q) { return close(p.value, q.value); });
    if (it == out.points.end()) {
      out.points.push_back(p);
    } else {
      it->mult += p.mult;
    }
  }
  std::stable_sort(out.points.begin(), out.points.end(),
                   [](const EigenvalueEntry& a, const EigenvalueEntry& b) { return lex_less(a.value, b.value); });

  const auto axis_of = [&](const Cluster& c) { return c.axis(model.kind); };
  for (auto& c : clusters) {
    auto it = std::find_if(out.clusters.begin(), out.clusters.end(), [&](const Cluster& q) {
      return q.side == c.side && close(q.limit, c.limit) &&
             std::abs(axis_of(q) - axis_of(c)) <= kAxisTolerance;
    });
    if (it == out.clusters.end()) {
      out.clusters.push_back(std::move(c));
    } else {
      it->deltas = DecaySequence::merged({it->deltas, c.deltas});
    }
  }
  std::stable_sort(out.clusters.begin(), out.clusters.end(), [&](const Cluster& a, const Cluster& b) {
    if (!close(a.limit, b.limit)) return lex_less(a.limit, b.limit);
    if (a.side != b.side) return a.side == Side::Above;
    return lex_less(axis_of(a), axis_of(b));
  });

  if (out.points.empty() && out.clusters.empty()) malformed("model has no spectral data");
  return out;
}

SpectrumModel modulus_spectrum(const SpectrumModel& model) {
  const SpectrumModel n = normalize_model(model);
  SpectrumModel m;
  m.kind = Kind::Positive;
  for (const auto& p : n.points) m.points.push_back({std::abs(p.value), p.mult});
  for (const auto& c : n.clusters) {
    auto mc = cluster_modulus(c, n.kind);
    m.clusters.push_back({mc.limit, mc.side, std::move(mc.deltas), std::nullopt});
  }
  return normalize_model(m);
}

ANVerdict classify(const SpectrumModel& model) {
  const SpectrumModel n = normalize_model(model);
  ANVerdict verdict;
  verdict.modulus_collapsed = modulus_spectrum(n);
  if (!n.infinite_dimensional()) return verdict;

  auto& v = verdict.violations;
  if (n.kind == Kind::Positive) {
    bool negative = std::any_of(n.points.begin(), n.points.end(),
                                [](const EigenvalueEntry& p) { return p.value.real() < -kMergeTolerance; });
    for (const auto& c : n.clusters) {
      if (c.limit.real() < -kMergeTolerance || c.value_at(c.deltas.first(), n.kind).real() < -kMergeTolerance) {
        negative = true;
      }
    }
    if (negative) v.push_back(Violation::NegativeValue);
  }

  const SpectrumModel& m = verdict.modulus_collapsed;
  std::vector<double> limits;
  bool below = false;
  for (const auto& c : m.clusters) {
    below = below || c.side == Side::Below;
    const double l = c.limit.real();
    if (std::none_of(limits.begin(), limits.end(), [&](double x) { return std::abs(x - l) <= kMergeTolerance; })) {
      limits.push_back(l);
    }
  }
  std::vector<double> infinite_points;
  for (const auto& p : m.points) {
    if (p.mult.is_infinite()) infinite_points.push_back(p.value.real());
  }

  if (limits.size() > 1) v.push_back(Violation::MultipleLimitPoints);
  if (below) v.push_back(Violation::LimitFromBelow);
  if (infinite_points.size() > 1) v.push_back(Violation::MultipleInfiniteMultiplicities);
  const bool mismatch = std::any_of(limits.begin(), limits.end(), [&](double l) {
    return std::any_of(infinite_points.begin(), infinite_points.end(),
                       [&](double x) { return std::abs(x - l) > kMergeTolerance; });
  });
  if (mismatch) v.push_back(Violation::LimitNeqInfiniteMult);

  verdict.is_an = v.empty();
  return verdict;
}

ModuliReport moduli_report(const SpectrumModel& model) {
  const SpectrumModel m = modulus_spectrum(model);
  ModuliReport r;
  r.finite_dim = !m.infinite_dimensional();

  double sup = -1.0;
  double inf = std::numeric_limits<double>::infinity();
  // (value, attained) candidates for the supremum
  std::vector<std::pair<double, bool>> tops;
  for (const auto& p : m.points) {
    const double x = p.value.real();
    tops.emplace_back(x, true);
    inf = std::min(inf, x);
  }
  for (const auto& c : m.clusters) {
    const double l = c.limit.real();
    if (c.side == Side::Above) {
      tops.emplace_back(l + c.deltas.first(), true);
      inf = std::min(inf, l);
    } else {
      tops.emplace_back(l, false);
      inf = std::min(inf, l - c.deltas.first());
    }
  }
  for (const auto& [x, attained] : tops) sup = std::max(sup, x);
  r.operator_norm = sup;
  r.min_modulus = inf;
  r.norm_attained = std::any_of(tops.begin(), tops.end(), [&](const std::pair<double, bool>& t) {
    return t.second && t.first >= sup - kMergeTolerance;
  });

  if (r.finite_dim) {
    r.essential_min_modulus = r.min_modulus;
  } else {
    double ess = std::numeric_limits<double>::infinity();
    for (const auto& c : m.clusters) ess = std::min(ess, c.limit.real());
    for (const auto& p : m.points) {
      if (p.mult.is_infinite()) ess = std::min(ess, p.value.real());
    }
    r.essential_min_modulus = ess;
  }
  return r;
}

bool models_equal(const SpectrumModel& a, const SpectrumModel& b, double tol, std::size_t depth) {
  if (a.kind != b.kind || a.points.size() != b.points.size() || a.clusters.size() != b.clusters.size()) {
    return false;
  }
  const auto near = [tol](Complex x, Complex y) {
    return std::abs(x - y) <= tol * std::max(1.0, std::max(std::abs(x), std::abs(y)));
  };
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    if (!near(a.points[i].value, b.points[i].value) || a.points[i].mult != b.points[i].mult) return false;
  }
  for (std::size_t i = 0; i < a.clusters.size(); ++i) {
    const auto& x = a.clusters[i];
    const auto& y = b.clusters[i];
    if (x.side != y.side || !near(x.limit, y.limit)) return false;
    if (std::abs(x.axis(a.kind) - y.axis(b.kind)) > tol) return false;
    if (x.deltas.terminates() != y.deltas.terminates()) return false;
    const auto dx = x.deltas.materialize(depth);
    const auto dy = y.deltas.materialize(depth);
    const std::size_t n = std::min(dx.size(), dy.size());
    if (n == 0) return false;
    if (x.deltas.terminates() && dx.size() != dy.size()) return false;
    for (std::size_t k = 0; k < n; ++k) {
      if (std::abs(dx[k] - dy[k]) > tol * std::max(dx[k], dy[k])) return false;
    }
  }
  return true;
}

}  // namespace anop

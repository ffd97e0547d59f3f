#include "anop/json_io.hpp"

#include <string>

namespace anop::io {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::Parse, what); }

// -0.0 would otherwise print as "-0.0" and break byte-stable reports.
double clean(double x) { return x == 0.0 ? 0.0 : x; }

json number(double x) { return clean(x); }

json complex_json(Complex z) { return json::array({clean(z.real()), clean(z.imag())}); }

json value_json(Complex z, Kind kind) {
  if (kind == Kind::Normal) return complex_json(z);
  return number(z.real());
}

Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  parse_error("expected a number or [re, im]");
}

const json& field(const json& j, const char* key) {
  if (!j.is_object()) parse_error(std::string("expected an object holding \"") + key + "\"");
  const auto it = j.find(key);
  if (it == j.end()) parse_error(std::string("missing field \"") + key + "\"");
  return *it;
}

double number_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number()) parse_error(std::string("field \"") + key + "\" must be a number");
  return v.get<double>();
}

const json& array_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_array()) parse_error(std::string("field \"") + key + "\" must be an array");
  return v;
}

Side side_from_string(const std::string& s) {
  if (s == "above") return Side::Above;
  if (s == "below") return Side::Below;
  parse_error("side must be \"above\" or \"below\"");
}

json f_entries_json(const std::vector<FEntry>& f) {
  json out = json::array();
  for (const auto& e : f) out.push_back({{"value", number(e.value)}, {"mult", to_json(e.mult)}});
  return out;
}

std::vector<FEntry> f_entries_from_json(const json& j) {
  if (!j.is_array()) parse_error("f entries must be an array");
  std::vector<FEntry> out;
  for (const auto& e : j) out.push_back({number_field(e, "value"), multiplicity_from_json(field(e, "mult"))});
  return out;
}

Multiplicity optional_mult(const json& j, const char* key) {
  const auto it = j.find(key);
  return it == j.end() ? Multiplicity::finite(0) : multiplicity_from_json(*it);
}

BlockPart part_from_string(const std::string& s) {
  for (BlockPart p : {BlockPart::Identity, BlockPart::K, BlockPart::F, BlockPart::KCluster}) {
    if (s == to_string(p)) return p;
  }
  parse_error("unknown block part \"" + s + "\"");
}

json doubles(const std::vector<double>& xs) {
  json out = json::array();
  for (double x : xs) out.push_back(number(x));
  return out;
}

}  // namespace

json to_json(Multiplicity m) {
  if (m.is_infinite()) return "inf";
  return m.count();
}

Multiplicity multiplicity_from_json(const json& j) {
  if (j.is_string() && j.get<std::string>() == "inf") return Multiplicity::infinite();
  if (j.is_number_unsigned()) return Multiplicity::finite(j.get<std::uint64_t>());
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return Multiplicity::finite(j.get<std::uint64_t>());
  parse_error("multiplicity must be a non-negative integer or \"inf\"");
}

json to_json(const DecaySequence& d) {
  switch (d.form()) {
    case DecaySequence::Form::Geometric:
      return {{"kind", "geometric"}, {"first", number(d.first_param())}, {"ratio", number(d.ratio())}};
    case DecaySequence::Form::Harmonic:
      return {{"kind", "harmonic"}, {"scale", number(d.first_param())}};
    case DecaySequence::Form::Union: {
      json parts = json::array();
      for (const auto& p : d.parts()) parts.push_back(to_json(p));
      return {{"kind", "union"}, {"parts", parts}};
    }
    case DecaySequence::Form::Explicit: {
      json out = {{"kind", "explicit"}, {"terms", doubles(d.terms())}};
      if (d.infinite_tail()) out["tail"] = "infinite";
      return out;
    }
  }
  return {};
}

DecaySequence decay_from_json(const json& j) {
  const json& kind = field(j, "kind");
  if (!kind.is_string()) parse_error("decay kind must be a string");
  const auto k = kind.get<std::string>();
  if (k == "geometric") return DecaySequence::geometric(number_field(j, "first"), number_field(j, "ratio"));
  if (k == "harmonic") return DecaySequence::harmonic(number_field(j, "scale"));
  if (k == "explicit") {
    std::vector<double> terms;
    for (const auto& t : array_field(j, "terms")) {
      if (!t.is_number()) parse_error("explicit terms must be numbers");
      terms.push_back(t.get<double>());
    }
    bool tail = false;
    if (const auto it = j.find("tail"); it != j.end()) {
      if (*it != "infinite" && *it != "finite") parse_error("tail must be \"finite\" or \"infinite\"");
      tail = *it == "infinite";
    }
    return DecaySequence::explicit_terms(std::move(terms), tail);
  }
  if (k == "union") {
    std::vector<DecaySequence> parts;
    for (const auto& p : array_field(j, "parts")) parts.push_back(decay_from_json(p));
    return DecaySequence::merged(std::move(parts));
  }
  parse_error("unknown decay kind \"" + k + "\"");
}

Kind kind_from_string(const std::string& s) {
  if (s == "positive") return Kind::Positive;
  if (s == "selfadjoint") return Kind::SelfAdjoint;
  if (s == "normal") return Kind::Normal;
  parse_error("kind must be positive, selfadjoint or normal");
}

json to_json(const SpectrumModel& m) {
  json points = json::array();
  for (const auto& p : m.points) points.push_back({{"value", value_json(p.value, m.kind)}, {"mult", to_json(p.mult)}});
  json clusters = json::array();
  for (const auto& c : m.clusters) {
    json cj = {{"limit", value_json(c.limit, m.kind)}, {"side", to_string(c.side)}, {"deltas", to_json(c.deltas)}};
    if (c.direction) cj["direction"] = complex_json(*c.direction);
    clusters.push_back(std::move(cj));
  }
  return {{"kind", to_string(m.kind)}, {"points", points}, {"clusters", clusters}};
}

SpectrumModel model_from_json(const json& j, std::optional<Kind> kind_override) {
  SpectrumModel m;
  if (kind_override) {
    m.kind = *kind_override;
  } else {
    const json& k = field(j, "kind");
    if (!k.is_string()) parse_error("kind must be a string");
    m.kind = kind_from_string(k.get<std::string>());
  }
  if (const auto it = j.find("points"); it != j.end()) {
    if (!it->is_array()) parse_error("points must be an array");
    for (const auto& p : *it) {
      m.points.push_back({complex_from_json(field(p, "value")), multiplicity_from_json(field(p, "mult"))});
    }
  }
  if (const auto it = j.find("clusters"); it != j.end()) {
    if (!it->is_array()) parse_error("clusters must be an array");
    for (const auto& c : *it) {
      Cluster cl;
      cl.limit = complex_from_json(field(c, "limit"));
      const json& side = field(c, "side");
      if (!side.is_string()) parse_error("side must be a string");
      cl.side = side_from_string(side.get<std::string>());
      cl.deltas = decay_from_json(field(c, "deltas"));
      if (const auto d = c.find("direction"); d != c.end()) cl.direction = complex_from_json(*d);
      m.clusters.push_back(std::move(cl));
    }
  }
  return m;
}

json to_json(const ANVerdict& v) {
  json codes = json::array();
  for (auto code : v.violations) codes.push_back(to_string(code));
  return {{"is_an", v.is_an}, {"violations", codes}, {"modulus_collapsed", to_json(v.modulus_collapsed)}};
}

json to_json(const ModuliReport& r) {
  return {{"operator_norm", number(r.operator_norm)},
          {"min_modulus", number(r.min_modulus)},
          {"essential_min_modulus", number(r.essential_min_modulus)},
          {"norm_attained", r.norm_attained},
          {"finite_dim", r.finite_dim}};
}

json to_json(const PositiveTriple& t) {
  json k = to_json(t.k);
  k.erase("kind");
  return {{"alpha", number(t.alpha)}, {"k", k}, {"f", f_entries_json(t.f)}, {"identity_mult", to_json(t.identity)}};
}

PositiveTriple triple_from_json(const json& j) {
  PositiveTriple t;
  t.alpha = number_field(j, "alpha");
  if (const auto it = j.find("k"); it != j.end()) t.k = model_from_json(*it, Kind::Positive);
  if (const auto it = j.find("f"); it != j.end()) t.f = f_entries_from_json(*it);
  t.identity = optional_mult(j, "identity_mult");
  return t;
}

json to_json(const StructuredDecomposition& sd) {
  json blocks = json::array();
  for (const auto& b : sd.support) {
    json bj = {{"phase", value_json(b.phase, sd.kind)}, {"part", to_string(b.part)}, {"value", number(b.value)}};
    if (b.deltas) bj["deltas"] = to_json(*b.deltas);
    if (b.part != BlockPart::KCluster) bj["mult"] = to_json(b.mult);
    blocks.push_back(std::move(bj));
  }
  return {{"alpha", number(sd.alpha)},
          {"kind", to_string(sd.kind)},
          {"blocks", blocks},
          {"kernel_mult", to_json(sd.kernel)}};
}

StructuredDecomposition structured_from_json(const json& j) {
  StructuredDecomposition sd;
  sd.alpha = number_field(j, "alpha");
  const json& kind = field(j, "kind");
  if (!kind.is_string()) parse_error("kind must be a string");
  sd.kind = kind_from_string(kind.get<std::string>());
  for (const auto& b : array_field(j, "blocks")) {
    Block block;
    block.phase = complex_from_json(field(b, "phase"));
    const json& part = field(b, "part");
    if (!part.is_string()) parse_error("block part must be a string");
    block.part = part_from_string(part.get<std::string>());
    if (const auto it = b.find("value"); it != b.end()) block.value = number_field(b, "value");
    if (const auto it = b.find("deltas"); it != b.end()) block.deltas = decay_from_json(*it);
    if (block.part == BlockPart::KCluster) {
      if (!block.deltas) parse_error("k_cluster blocks need deltas");
      block.mult = Multiplicity::infinite();
    } else {
      block.mult = multiplicity_from_json(field(b, "mult"));
    }
    sd.support.push_back(std::move(block));
  }
  sd.kernel = optional_mult(j, "kernel_mult");
  return sd;
}

json to_json(const AMForm& am) {
  json k1 = to_json(am.k1);
  k1.erase("kind");
  return {{"beta", number(am.beta)}, {"k1", k1}, {"f1", f_entries_json(am.f1)}, {"identity_mult", to_json(am.identity)}};
}

AMForm am_form_from_json(const json& j) {
  AMForm am;
  am.beta = number_field(j, "beta");
  if (const auto it = j.find("k1"); it != j.end()) am.k1 = model_from_json(*it, Kind::Positive);
  if (const auto it = j.find("f1"); it != j.end()) am.f1 = f_entries_from_json(*it);
  am.identity = optional_mult(j, "identity_mult");
  return am;
}

json to_json(const FredholmReport& r) {
  return {{"kernel_dimension", to_json(r.kernel_dimension)},
          {"range_closed", r.range_closed},
          {"is_injective", r.is_injective},
          {"is_fredholm", r.is_fredholm},
          {"index", r.index},
          {"is_left_semi_fredholm", r.is_left_semi_fredholm},
          {"essential_min_modulus", number(r.essential_min_modulus)}};
}

json to_json(const Matrix& m) {
  json entries = json::array();
  for (const auto& z : m.data()) entries.push_back(complex_json(z));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

Matrix matrix_from_json(const json& j) {
  const json& rows = field(j, "rows");
  const json& cols = field(j, "cols");
  if (!rows.is_number_integer() || !cols.is_number_integer() || rows.get<std::int64_t>() <= 0 ||
      cols.get<std::int64_t>() <= 0) {
    parse_error("rows and cols must be positive integers");
  }
  const auto r = rows.get<std::size_t>();
  const auto c = cols.get<std::size_t>();
  if (r > kMaxDim || c > kMaxDim) parse_error("matrix exceeds the supported dimension");
  std::vector<Complex> entries;
  for (const auto& e : array_field(j, "entries")) entries.push_back(complex_from_json(e));
  if (entries.size() != r * c) throw Error(ErrorCode::ShapeMismatch, "entry count does not match rows * cols");
  Matrix m(r, c, std::move(entries));
  if (!m.all_finite()) parse_error("matrix entries must be finite");
  return m;
}

json to_json(const VerificationReport& r) {
  return {{"residual_reconstruction", number(r.residual_reconstruction)},
          {"residual_kf", number(r.residual_kf)},
          {"min_eig_alpha_minus_f", number(r.min_eig_alpha_minus_f)},
          {"psd_defect_k", number(r.psd_defect_k)},
          {"psd_defect_f", number(r.psd_defect_f)},
          {"converse_min_eig", number(r.converse_min_eig)},
          {"offdiag_upper", number(r.offdiag_upper)},
          {"offdiag_lower", number(r.offdiag_lower)},
          {"failures", r.failures},
          {"passed", r.passed}};
}

json to_json(const BlockForm& b) {
  return {{"null_dim", b.null_basis.cols()},
          {"range_dim", b.range_basis.cols()},
          {"nn", to_json(b.nn)},
          {"nr", to_json(b.nr)},
          {"rn", to_json(b.rn)},
          {"rr", to_json(b.rr)},
          {"offdiag_upper", number(b.offdiag_upper)},
          {"offdiag_lower", number(b.offdiag_lower)}};
}

json to_json(const PolarPair& p) { return {{"v", to_json(p.v)}, {"modulus", to_json(p.modulus)}}; }

json to_json(const ConverseWitness& w) {
  return {{"script_k", to_json(w.script_k)},
          {"script_f", to_json(w.script_f)},
          {"script_k_min_eig", number(w.script_k_min_eig)},
          {"t_star_t_residual", number(w.t_star_t_residual)},
          {"an_predicted", w.an_predicted}};
}

}  // namespace anop::io

#include "anop/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "anop/json_io.hpp"
#include "anop/oracle.hpp"

namespace anop::cli {

namespace {

using io::json;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::vector<std::string> inputs;
  std::string out;
  std::string format = "json";
  double tol = kDefaultTolerance;
  std::optional<std::size_t> depth;
  std::optional<std::size_t> dim;
  std::uint64_t seed = 0;
  std::string kind = "auto";
  double lambda = 0.0;
  bool verify = false;
  std::string splitter = "f";
  std::size_t trials = 1000;
};

class Context {
 public:
  Context(const Options& o, std::istream& in) : opts(o), in_(in) {}

  const Options& opts;

  json input(std::size_t i = 0) const {
    if (opts.inputs.size() <= i) throw Error(ErrorCode::Parse, "missing --in argument");
    const std::string& path = opts.inputs[i];
    json j;
    try {
      if (path == "-") {
        j = json::parse(in_);
      } else {
        std::ifstream f(path);
        if (!f) throw IoError("cannot open " + path);
        j = json::parse(f);
      }
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::Parse, path + ": " + e.what());
    }
    // accept whole reports wherever their payload is expected
    if (j.is_object() && j.contains("schema_version") && j.contains("result")) return j["result"];
    return j;
  }

  std::optional<Kind> kind_override() const {
    if (opts.kind == "auto") return std::nullopt;
    return io::kind_from_string(opts.kind);
  }

  SpectrumModel model(std::size_t i = 0) const { return io::model_from_json(input(i), kind_override()); }

  std::size_t map_depth() const { return opts.depth.value_or(kDefaultMapDepth); }

  // Triples may be given directly or as a positive spectrum to decompose.
  PositiveTriple triple() const {
    const json j = input();
    if (j.is_object() && j.contains("alpha")) return io::triple_from_json(j);
    return decompose_positive(io::model_from_json(j, kind_override()));
  }

  RealizableData realizable() const {
    const json j = input();
    if (j.is_object() && j.contains("blocks")) return io::structured_from_json(j);
    if (j.is_object() && j.contains("alpha")) return io::triple_from_json(j);
    const SpectrumModel m = io::model_from_json(j, kind_override());
    switch (m.kind) {
      case Kind::Positive: return decompose_positive(m);
      case Kind::SelfAdjoint: return structure_selfadjoint(m);
      case Kind::Normal: return structure_normal(m);
    }
    return decompose_positive(m);
  }

 private:
  std::istream& in_;
};

Matrix matrix_field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::Parse, std::string("missing matrix \"") + key + "\"");
  return io::matrix_from_json(j.at(key));
}

double alpha_field(const json& j) {
  if (!j.is_object() || !j.contains("alpha") || !j.at("alpha").is_number()) {
    throw Error(ErrorCode::Parse, "missing number \"alpha\"");
  }
  return j.at("alpha").get<double>();
}

Matrix v_or_identity(const json& j, std::size_t n) {
  return j.contains("v") ? io::matrix_from_json(j.at("v")) : Matrix::identity(n);
}

// --- verbs -----------------------------------------------------------------

json do_classify(const Context& c) {
  const SpectrumModel m = c.model();
  json r = io::to_json(classify(m));
  r["moduli"] = io::to_json(moduli_report(m));
  return r;
}

json do_decompose(const Context& c) { return io::to_json(decompose_positive(c.model())); }

json do_recompose(const Context& c) {
  const json j = c.input();
  if (j.is_object() && j.contains("blocks")) return io::to_json(normalize_model(recombine(io::structured_from_json(j))));
  if (j.is_object() && j.contains("beta")) return io::to_json(am_spectrum(io::am_form_from_json(j)));
  return io::to_json(recompose(io::triple_from_json(j)));
}

json do_square(const Context& c) { return io::to_json(square_triple(c.triple(), c.map_depth())); }
json do_sqrt(const Context& c) { return io::to_json(sqrt_triple(c.triple(), c.map_depth())); }

json do_invert(const Context& c) {
  const AMForm am = invert_triple(c.triple(), c.map_depth());
  json r = io::to_json(am);
  r["spectrum"] = io::to_json(am_spectrum(am));
  return r;
}

json do_structure(const Context& c) {
  const SpectrumModel m = c.model();
  if (m.kind == Kind::Normal) return io::to_json(structure_normal(m));
  return io::to_json(structure_selfadjoint(m));
}

json do_gram(const Context& c) { return io::to_json(gram_spectrum(c.model(), c.map_depth())); }
json do_adjoint(const Context& c) { return io::to_json(adjoint_spectrum(c.model())); }
json do_shift(const Context& c) { return io::to_json(imaginary_shift(c.model(), c.opts.lambda)); }
json do_fredholm(const Context& c) { return io::to_json(fredholm_report(c.triple())); }

json do_realize(const Context& c) {
  if (!c.opts.dim) throw Error(ErrorCode::Parse, "realize needs --dim");
  const Realization r = realize_matrix(c.realizable(), *c.opts.dim, c.opts.seed);
  json spectrum = json::array();
  for (const auto& z : r.spectrum) spectrum.push_back(json::array({z.real() == 0.0 ? 0.0 : z.real(), z.imag() == 0.0 ? 0.0 : z.imag()}));
  json out = {{"alpha", r.alpha},     {"dim", *c.opts.dim},     {"seed", c.opts.seed},
              {"hermitian", r.hermitian}, {"spectrum", spectrum}, {"t", io::to_json(r.t)},
              {"k", io::to_json(r.k)}, {"f", io::to_json(r.f)},  {"v", io::to_json(r.v)}};
  if (c.opts.verify) out["verification"] = io::to_json(verify_structure(r.t, r.k, r.f, r.v, r.alpha, c.opts.tol));
  return out;
}

json do_verify(const Context& c) {
  const json j = c.input();
  const Matrix t = matrix_field(j, "t");
  return io::to_json(verify_structure(t, matrix_field(j, "k"), matrix_field(j, "f"), v_or_identity(j, t.rows()),
                                      alpha_field(j), c.opts.tol));
}

json do_blocks(const Context& c) {
  const json j = c.input();
  const Matrix t = matrix_field(j, "t");
  Matrix splitter;
  if (j.contains("splitter")) {
    splitter = matrix_field(j, "splitter");
  } else if (c.opts.splitter == "f" || c.opts.splitter == "k") {
    splitter = matrix_field(j, c.opts.splitter.c_str());
  } else {
    throw Error(ErrorCode::Parse, "--splitter must be f or k");
  }
  return io::to_json(block_form(t, splitter, c.opts.tol));
}

json do_invert_matrix(const Context& c) {
  const json j = c.input();
  const Matrix t = matrix_field(j, "t");
  const Matrix v = v_or_identity(j, t.rows());
  if (frobenius_norm(v - Matrix::identity(t.rows())) > c.opts.tol * std::max(1.0, frobenius_norm(v))) {
    throw Error(ErrorCode::WrongKind, "the block inverse applies to positive realizations (V = I)");
  }
  const BlockInverse b = inverse_via_blocks(t, matrix_field(j, "k"), matrix_field(j, "f"), alpha_field(j), c.opts.tol);
  return {{"t_inv", io::to_json(b.t_inv)},
          {"residual", b.residual},
          {"direct_residual", b.direct_residual},
          {"agreement", b.agreement}};
}

json do_polar(const Context& c) {
  const json j = c.input();
  const Matrix t = j.contains("entries") ? io::matrix_from_json(j) : matrix_field(j, "t");
  const PolarPair p = polar_decompose(t, c.opts.tol);
  json out = io::to_json(p);
  const double scale = frobenius_norm(t);
  out["residual"] = scale > 0.0 ? frobenius_norm(p.v * p.modulus - t) / scale : 0.0;
  return out;
}

json do_oracle(const Context& c) {
  const SpectrumModel m = c.model();
  TruncationProfile profile;
  if (c.opts.depth) profile.depth = *c.opts.depth;
  const ANVerdict oracle = attainment_oracle(m, profile);
  const ANVerdict classifier = classify(m);
  json codes = json::array();
  for (auto v : oracle.violations) codes.push_back(to_string(v));
  return {{"is_an", oracle.is_an},
          {"violations", codes},
          {"classifier_is_an", classifier.is_an},
          {"agree", oracle.is_an == classifier.is_an},
          {"depth", profile.depth},
          {"subset_cap", profile.subset_cap}};
}

json do_fuzz(const Context& c) {
  TruncationProfile profile;
  if (c.opts.depth) profile.depth = *c.opts.depth;
  const std::size_t n = c.opts.trials;

  struct Trial {
    bool agree = false;
    bool expected_ok = false;
    std::string family;
  };
  std::vector<Trial> trials(n);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < n; ++i) {
    const GeneratorProfile gp = profile_for_trial(c.opts.seed + i);
    const SpectrumModel m = generate_model(gp);
    const ANVerdict v = classify(m);
    const bool oracle_an = attainment_oracle(m, profile).is_an;
    Trial t;
    t.agree = v.is_an == oracle_an;
    t.family = gp.code ? std::string(to_string(*gp.code)) : std::string(to_string(gp.family));
    t.expected_ok = gp.code ? (!v.is_an && std::find(v.violations.begin(), v.violations.end(), *gp.code) !=
                                                v.violations.end())
                            : v.is_an;
    trials[i] = std::move(t);
  }

  std::size_t agreements = 0;
  std::map<std::string, std::size_t> families;
  json disagreements = json::array();
  json off_family = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    agreements += trials[i].agree;
    ++families[trials[i].family];
    if (!trials[i].agree) disagreements.push_back(c.opts.seed + i);
    if (!trials[i].expected_ok) off_family.push_back(c.opts.seed + i);
  }
  return {{"trials", n},
          {"agreements", agreements},
          {"disagreement_seeds", disagreements},
          {"off_family_seeds", off_family},
          {"families", families},
          {"depth", profile.depth}};
}

using Handler = json (*)(const Context&);

const std::map<std::string, std::pair<Handler, const char*>>& verbs() {
  static const std::map<std::string, std::pair<Handler, const char*>> table = {
      {"classify", {do_classify, "AN verdict and moduli of a spectrum"}},
      {"decompose", {do_decompose, "canonical triple K - F + alpha I of a positive AN spectrum"}},
      {"recompose", {do_recompose, "spectrum of a triple, structured decomposition or AM form"}},
      {"square", {do_square, "triple of T^2"}},
      {"sqrt", {do_sqrt, "triple of T^(1/2)"}},
      {"invert", {do_invert, "AM form beta I - K1 + F1 of the inverse"}},
      {"structure", {do_structure, "K - F + alpha V for a self-adjoint or normal spectrum"}},
      {"gram", {do_gram, "spectrum of T*T"}},
      {"shift", {do_shift, "spectrum of T + i lambda for self-adjoint T"}},
      {"adjoint", {do_adjoint, "spectrum of T*"}},
      {"fredholm", {do_fredholm, "kernel, range and Fredholm data of a triple"}},
      {"realize", {do_realize, "dense matrix realization (needs --dim)"}},
      {"verify", {do_verify, "numeric structure checks on t, k, f, v, alpha"}},
      {"blocks", {do_blocks, "2x2 block form along N(S) + R(S)"}},
      {"invert-matrix", {do_invert_matrix, "inverse from the (N(F), R(F)) block formula"}},
      {"polar", {do_polar, "polar decomposition T = V|T|"}},
      {"oracle", {do_oracle, "brute-force attainment verdict"}},
      {"fuzz", {do_fuzz, "classifier vs oracle on generated models"}},
  };
  return table;
}

void render_text(const json& report, std::ostream& out) {
  out << "command: " << report["command"].get<std::string>() << '\n';
  for (const auto& d : report["diagnostics"]) {
    out << "error " << d["code"].get<std::string>() << ": " << d["message"].get<std::string>() << '\n';
  }
  const json& result = report["result"];
  if (!result.is_object()) return;
  for (const auto& [key, value] : result.items()) {
    if (value.is_object() && value.contains("entries")) {
      out << key << ": " << value["rows"] << "x" << value["cols"] << " matrix\n";
    } else {
      out << key << ": " << value.dump() << '\n';
    }
  }
}

}  // namespace

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in) {
  CLI::App app{"Absolutely norm attaining operators: classification, decompositions and matrix checks", "anop"};
  app.require_subcommand(1);
  Options opts;

  for (const auto& [name, entry] : verbs()) {
    CLI::App* sub = app.add_subcommand(name, entry.second);
    sub->add_option("--in", opts.inputs, "input file, - for stdin (repeatable)");
    sub->add_option("--out", opts.out, "write the report here instead of stdout");
    sub->add_option("--format", opts.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--tol", opts.tol, "numeric tolerance")->envname("ANOP_TOL");
    sub->add_option("--depth", opts.depth, "cluster materialization depth");
    sub->add_option("--dim", opts.dim, "realization dimension")->check(CLI::Range(std::size_t{1}, kMaxDim));
    sub->add_option("--seed", opts.seed, "basis seed (0 = identity basis)");
    sub->add_option("--kind", opts.kind, "override the file's kind")
        ->check(CLI::IsMember({"auto", "positive", "selfadjoint", "normal"}));
    if (name == "shift") sub->add_option("--lambda", opts.lambda, "imaginary shift")->required();
    if (name == "realize") sub->add_flag("--verify", opts.verify, "attach verify_structure results");
    if (name == "blocks") sub->add_option("--splitter", opts.splitter, "f or k");
    if (name == "fuzz") sub->add_option("--trials", opts.trials, "number of generated models");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n" << app.help("", CLI::AppFormatMode::All);
    return kExitUsage;
  }

  const std::string verb = app.get_subcommands().front()->get_name();
  json report = {{"schema_version", "1"}, {"command", verb}, {"result", nullptr}, {"diagnostics", json::array()}};
  int code = kExitOk;
  const auto diagnose = [&](std::string_view c, const std::string& message, int exit) {
    report["diagnostics"].push_back({{"code", c}, {"message", message}});
    code = exit;
  };

  try {
    const Context ctx(opts, in);
    report["result"] = verbs().at(verb).first(ctx);
  } catch (const Error& e) {
    diagnose(to_string(e.code()), e.what(), e.code() == ErrorCode::Parse ? kExitIo : kExitDomain);
  } catch (const IoError& e) {
    diagnose("IO", e.what(), kExitIo);
  } catch (const json::exception& e) {
    diagnose("PARSE", e.what(), kExitIo);
  }

  std::ostringstream text;
  if (opts.format == "text") {
    render_text(report, text);
  } else {
    text << report.dump(2) << '\n';
  }

  if (opts.out.empty()) {
    out << text.str();
  } else {
    std::ofstream f(opts.out);
    if (!f || !(f << text.str())) {
      err << "cannot write " << opts.out << '\n';
      return kExitIo;
    }
  }
  return code;
}

}  // namespace anop::cli

#include "anop/realize.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>

#include "anop/kernels.hpp"
#include "anop/rng.hpp"

namespace anop {

namespace {

// One basis direction of the diagonal model: entries of T, K, F, V.
struct Direction {
  Complex t, k, f, v;
};

// Infinite source of directions (cluster terms or an infinite block).
struct Source {
  std::function<Direction(std::size_t)> make;
  std::size_t available;  // how many directions this source can still supply
  std::size_t used = 0;
};

std::vector<Direction> fill(std::vector<Direction> finite, std::vector<Source> sources, Direction pad,
                            std::size_t dim) {
  if (dim > kMaxDim) throw Error(ErrorCode::DimTooSmall, "dimension exceeds the dense backend limit");
  if (finite.size() > dim) {
    throw Error(ErrorCode::DimTooSmall, "dimension " + std::to_string(dim) + " is below the " +
                                            std::to_string(finite.size()) + " finite-multiplicity directions");
  }
  std::vector<Direction> out = std::move(finite);
  while (out.size() < dim) {
    bool any = false;
    for (auto& s : sources) {
      if (out.size() == dim) break;
      if (s.used < s.available) {
        out.push_back(s.make(s.used++));
        any = true;
      }
    }
    if (!any) out.push_back(pad);
  }
  return out;
}

void push_copies(std::vector<Direction>& out, const Direction& d, Multiplicity m) {
  for (std::uint64_t i = 0; i < m.count(); ++i) out.push_back(d);
}

Source cluster_source(const DecaySequence& deltas, std::function<Direction(double)> at, std::size_t dim) {
  auto terms = std::make_shared<std::vector<double>>(deltas.materialize(dim));
  const std::size_t n = terms->size();
  return {[terms, at](std::size_t i) { return at((*terms)[i]); }, n};
}

Source repeat_source(Direction d) {
  return {[d](std::size_t) { return d; }, std::numeric_limits<std::size_t>::max()};
}

std::vector<Direction> directions_of(const PositiveTriple& t, std::size_t dim) {
  validate_triple(t);
  const double a = t.alpha;
  std::vector<Direction> finite;
  for (const auto& e : t.f) push_copies(finite, {a - e.value, 0.0, e.value, 1.0}, e.mult);
  for (const auto& p : t.k.points) {
    const double k = p.value.real();
    push_copies(finite, {a + k, k, 0.0, 1.0}, p.mult);
  }
  const Direction id{a, 0.0, 0.0, 1.0};
  std::vector<Source> sources;
  if (!t.identity.is_infinite()) {
    push_copies(finite, id, t.identity);
  }
  for (const auto& c : t.k.clusters) {
    sources.push_back(cluster_source(c.deltas, [a](double d) { return Direction{a + d, d, 0.0, 1.0}; }, dim));
  }
  if (t.identity.is_infinite()) sources.push_back(repeat_source(id));
  return fill(std::move(finite), std::move(sources), id, dim);
}

std::vector<Direction> directions_of(const StructuredDecomposition& sd, std::size_t dim) {
  const double a = sd.alpha;
  std::vector<Direction> finite;
  std::vector<Source> sources;
  for (const auto& b : sd.support) {
    const Complex p = b.phase;
    Direction d{};
    switch (b.part) {
      case BlockPart::Identity: d = {p * a, 0.0, 0.0, p}; break;
      case BlockPart::K: d = {p * (a + b.value), p * b.value, 0.0, p}; break;
      case BlockPart::F: d = {p * (a - b.value), 0.0, p * b.value, p}; break;
      case BlockPart::KCluster:
        if (!b.deltas) throw Error(ErrorCode::Malformed, "k_cluster block without deltas");
        sources.push_back(cluster_source(
            *b.deltas, [a, p](double x) { return Direction{p * (a + x), p * x, 0.0, p}; }, dim));
        continue;
    }
    if (b.mult.is_infinite()) {
      sources.push_back(repeat_source(d));
    } else {
      push_copies(finite, d, b.mult);
    }
  }
  const Direction kernel{0.0, 0.0, 0.0, 0.0};
  if (sd.kernel.is_infinite()) {
    sources.push_back(repeat_source(kernel));
  } else {
    push_copies(finite, kernel, sd.kernel);
  }
  return fill(std::move(finite), std::move(sources), kernel, dim);
}

// Q diag(d) Q*
Matrix conjugate_diagonal(const Matrix& q, const std::vector<Complex>& d) {
  Matrix qd = q;
  for (std::size_t i = 0; i < qd.rows(); ++i) {
    for (std::size_t j = 0; j < qd.cols(); ++j) qd(i, j) *= d[j];
  }
  return qd * q.adjoint();
}

double min_eigenvalue(const Matrix& h, double tol) {
  if (h.rows() == 0) return 0.0;
  return hermitian_eigen(h.hermitian_part(), tol).eigenvalues.front();
}

Matrix adjoint_times(const Matrix& a, const Matrix& b) {
  Matrix c;
  kernels::gemm_adjoint_left(a, b, c);
  return c;
}

void require_square(const Matrix& m, std::size_t n, const char* name) {
  if (m.rows() != n || m.cols() != n) {
    throw Error(ErrorCode::ShapeMismatch, std::string(name) + " must be " + std::to_string(n) + "x" + std::to_string(n));
  }
}

}  // namespace

Matrix random_unitary(std::size_t n, std::uint64_t seed) {
  Matrix q = Matrix::identity(n);
  if (seed == 0) return q;
  SplitMix64 rng(seed);
  std::vector<Complex> v(n);
  for (std::size_t r = 0; r < n; ++r) {
    double norm2 = 0.0;
    for (auto& z : v) {
      const double re = rng.uniform(-1.0, 1.0);
      const double im = rng.uniform(-1.0, 1.0);
      z = {re, im};
      norm2 += std::norm(z);
    }
    if (norm2 < 1e-300) continue;
    // q <- q (I - 2 v v* / |v|^2)
    for (std::size_t i = 0; i < n; ++i) {
      Complex s{};
      for (std::size_t j = 0; j < n; ++j) s += q(i, j) * v[j];
      s *= 2.0 / norm2;
      for (std::size_t j = 0; j < n; ++j) q(i, j) -= s * std::conj(v[j]);
    }
  }
  return q;
}

Realization realize_matrix(const RealizableData& data, std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw Error(ErrorCode::DimTooSmall, "dimension must be positive");
  Realization r;
  std::vector<Direction> dirs;
  if (const auto* t = std::get_if<PositiveTriple>(&data)) {
    dirs = directions_of(*t, dim);
    r.alpha = t->alpha;
    r.hermitian = true;
  } else {
    const auto& sd = std::get<StructuredDecomposition>(data);
    dirs = directions_of(sd, dim);
    r.alpha = sd.alpha;
    r.hermitian = sd.kind != Kind::Normal;
  }

  std::vector<Complex> dt, dk, df, dv;
  for (const auto& d : dirs) {
    dt.push_back(d.t);
    dk.push_back(d.k);
    df.push_back(d.f);
    dv.push_back(d.v);
  }
  r.basis = random_unitary(dim, seed);
  r.t = conjugate_diagonal(r.basis, dt);
  r.k = conjugate_diagonal(r.basis, dk);
  r.f = conjugate_diagonal(r.basis, df);
  r.v = conjugate_diagonal(r.basis, dv);
  if (r.hermitian) {
    r.t = r.t.hermitian_part();
    r.k = r.k.hermitian_part();
    r.f = r.f.hermitian_part();
    r.v = r.v.hermitian_part();
  }
  r.spectrum = std::move(dt);
  return r;
}

VerificationReport verify_structure(const Matrix& t, const Matrix& k, const Matrix& f, const Matrix& v,
                                    double alpha, double tol) {
  const std::size_t n = t.rows();
  require_square(t, n, "T");
  require_square(k, n, "K");
  require_square(f, n, "F");
  require_square(v, n, "V");

  VerificationReport rep;
  const double s = std::max(1.0, frobenius_norm(t));

  rep.residual_reconstruction = frobenius_norm(t - (k - f + Complex(alpha) * v));
  rep.residual_kf = std::max({frobenius_norm(k * f), frobenius_norm(adjoint_times(k, f)),
                              frobenius_norm(k * f.adjoint())});

  const Matrix vk = adjoint_times(v, k);
  const Matrix vf = adjoint_times(v, f);
  const Matrix vf_h = vf.hermitian_part();
  rep.min_eig_alpha_minus_f = min_eigenvalue(Complex(alpha) * Matrix::identity(n) - vf_h, tol);
  rep.psd_defect_k = std::max(0.0, -min_eigenvalue(vk, tol)) + hermitian_defect(vk);
  rep.psd_defect_f = std::max(0.0, -min_eigenvalue(vf, tol)) + hermitian_defect(vf);

  const Matrix script_k = adjoint_times(k, k) + Complex(alpha) * (vk + vk.adjoint());
  rep.converse_min_eig = min_eigenvalue(script_k, tol);

  const BlockForm bf = block_form(t, vf_h, tol);
  rep.offdiag_upper = bf.offdiag_upper;
  rep.offdiag_lower = bf.offdiag_lower;

  auto& fl = rep.failures;
  if (rep.residual_reconstruction > tol * s) fl.emplace_back("residual_reconstruction");
  if (rep.residual_kf > tol * s * s) fl.emplace_back("residual_kf");
  if (rep.min_eig_alpha_minus_f < -tol * s) fl.emplace_back("min_eig_alpha_minus_f");
  if (rep.psd_defect_k > tol * s) fl.emplace_back("psd_defect_k");
  if (rep.psd_defect_f > tol * s) fl.emplace_back("psd_defect_f");
  if (rep.converse_min_eig < -tol * s * s) fl.emplace_back("converse_min_eig");
  if (std::max(rep.offdiag_upper, rep.offdiag_lower) > tol * s) fl.emplace_back("offdiag_block_norms");
  rep.passed = fl.empty();
  return rep;
}

BlockForm block_form(const Matrix& t, const Matrix& splitter, double tol) {
  const std::size_t n = t.rows();
  require_square(t, n, "T");
  require_square(splitter, n, "splitter");
  const EigenDecomposition e = hermitian_eigen(splitter, tol);
  const double top = e.eigenvalues.empty() ? 0.0 : std::max(0.0, e.eigenvalues.back());
  const double threshold = tol * top;

  std::vector<std::size_t> null_idx, range_idx;
  for (std::size_t i = 0; i < n; ++i) {
    (top > 0.0 && e.eigenvalues[i] > threshold ? range_idx : null_idx).push_back(i);
  }
  BlockForm bf;
  bf.null_basis = select_columns(e.basis, null_idx);
  bf.range_basis = select_columns(e.basis, range_idx);
  const Matrix tn = t * bf.null_basis;
  const Matrix tr = t * bf.range_basis;
  bf.nn = adjoint_times(bf.null_basis, tn);
  bf.nr = adjoint_times(bf.null_basis, tr);
  bf.rn = adjoint_times(bf.range_basis, tn);
  bf.rr = adjoint_times(bf.range_basis, tr);
  bf.offdiag_upper = frobenius_norm(bf.nr);
  bf.offdiag_lower = frobenius_norm(bf.rn);
  return bf;
}

BlockInverse inverse_via_blocks(const Matrix& t, const Matrix& k, const Matrix& f, double alpha, double tol) {
  const std::size_t n = t.rows();
  require_square(t, n, "T");
  require_square(k, n, "K");
  require_square(f, n, "F");
  if (!(alpha > 0.0)) throw Error(ErrorCode::Singular, "alpha = 0: no bounded inverse");
  const auto sv = singular_values(t);
  if (sv.empty() || sv.front() <= tol * sv.back()) throw Error(ErrorCode::Singular, "T is not injective");

  const BlockForm bf = block_form(t, f, tol);
  const Matrix& nb = bf.null_basis;
  const Matrix& rb = bf.range_basis;

  // N(F) block
  const Matrix k0 = adjoint_times(nb, k * nb).hermitian_part();
  const EigenDecomposition ek = hermitian_eigen(k0, tol);
  const Matrix shifted_inv = spectral_function(ek, [alpha](double x) { return 1.0 / (x + alpha); });
  Matrix top = Matrix::identity(nb.cols()) - k0 * shifted_inv;
  top *= 1.0 / alpha;

  // R(F) block
  const Matrix f0 = adjoint_times(rb, f * rb).hermitian_part();
  const EigenDecomposition ef = hermitian_eigen(f0, tol);
  if (!ef.eigenvalues.empty() && ef.eigenvalues.back() >= alpha * (1.0 - tol)) {
    throw Error(ErrorCode::Singular, "an eigenvalue of F reaches alpha");
  }
  const Matrix gap_inv = spectral_function(ef, [alpha](double x) { return 1.0 / (alpha - x); });
  Matrix bottom = Matrix::identity(rb.cols()) + f0 * gap_inv;
  bottom *= 1.0 / alpha;

  BlockInverse out;
  out.t_inv = nb * top * nb.adjoint() + rb * bottom * rb.adjoint();
  if (t.hermitian_part() == t) out.t_inv = out.t_inv.hermitian_part();
  const Matrix id = Matrix::identity(n);
  out.residual = frobenius_norm(t * out.t_inv - id);
  const Matrix direct = inverse(t);
  out.direct_residual = frobenius_norm(t * direct - id);
  out.agreement = frobenius_norm(out.t_inv - direct);
  return out;
}

BlockInverse inverse_via_blocks(const Realization& r, double tol) {
  return inverse_via_blocks(r.t, r.k, r.f, r.alpha, tol);
}

ConverseWitness converse_witness(const Matrix& k, const Matrix& f, const Matrix& v, double alpha, double tol) {
  const std::size_t n = v.cols();
  if (k.rows() != v.rows() || f.rows() != v.rows() || k.cols() != n || f.cols() != n) {
    throw Error(ErrorCode::ShapeMismatch, "K, F and V must share one shape");
  }
  const double vscale = std::max(1.0, frobenius_norm(v));
  if (frobenius_norm(v * v.adjoint() * v - v) > tol * vscale) {
    throw Error(ErrorCode::NotPartialIsometry, "V V* V != V");
  }

  const Complex a(alpha);
  const Matrix vk = adjoint_times(v, k);
  const Matrix vf = adjoint_times(v, f);
  const Matrix fk = adjoint_times(f, k);

  ConverseWitness w;
  w.script_k = adjoint_times(k, k) + a * (vk + vk.adjoint());
  // signs chosen so that T*T = script_k - script_f + alpha^2 V*V holds; in
  // the commuting positive case script_f = 2 alpha F - F^2
  w.script_f = fk + fk.adjoint() + a * (vf + vf.adjoint()) - adjoint_times(f, f);

  const Matrix t = k - f + a * v;
  const Matrix tt = adjoint_times(t, t);
  w.t_star_t_residual = frobenius_norm(tt - (w.script_k - w.script_f + a * a * adjoint_times(v, v)));
  w.script_k_min_eig = min_eigenvalue(w.script_k, tol);
  w.an_predicted = w.script_k_min_eig >= -tol * std::max(1.0, frobenius_norm(w.script_k));
  return w;
}

}  // namespace anop

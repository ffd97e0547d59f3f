#include "anop/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "anop/kernels.hpp"

namespace anop {

namespace {

// Unitary 2x2 rotation zeroing the (p,q) entry of the Hermitian 2x2 block
// [[app, apq], [conj(apq), aqq]]. Entries are J(p,p), J(p,q), J(q,p), J(q,q).
struct Rotation {
  Complex pp, pq, qp, qq;
};

Rotation jacobi_rotation(double app, double aqq, Complex apq) {
  const double b = std::abs(apq);
  const Complex e = apq / b;
  const double theta = (aqq - app) / (2.0 * b);
  double t;
  if (std::abs(theta) > 1e150) {
    t = 1.0 / (2.0 * theta);
  } else {
    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  }
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  // diag(1, conj(e)) makes the block real; the real rotation finishes it
  return {c, s, -s * std::conj(e), c * std::conj(e)};
}

void rotate_columns(Matrix& a, std::size_t p, std::size_t q, const Rotation& j) {
  for (std::size_t k = 0; k < a.rows(); ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = akp * j.pp + akq * j.qp;
    a(k, q) = akp * j.pq + akq * j.qq;
  }
}

void rotate_rows_adjoint(Matrix& a, std::size_t p, std::size_t q, const Rotation& j) {
  for (std::size_t k = 0; k < a.cols(); ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = std::conj(j.pp) * apk + std::conj(j.qp) * aqk;
    a(q, k) = std::conj(j.pq) * apk + std::conj(j.qq) * aqk;
  }
}

Matrix scale_columns(const Matrix& q, std::span<const double> d) {
  Matrix m = q;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) *= d[j];
  }
  return m;
}

Matrix times_adjoint(const Matrix& a, const Matrix& b) {
  // a * b^*
  return a * b.adjoint();
}

}  // namespace

EigenDecomposition hermitian_eigen(const Matrix& t, double tol, double convergence, int max_sweeps) {
  if (!t.square()) throw Error(ErrorCode::ShapeMismatch, "hermitian_eigen needs a square matrix");
  if (t.rows() > kMaxDim) throw Error(ErrorCode::ShapeMismatch, "dimension exceeds the dense backend limit");
  if (!t.all_finite()) throw Error(ErrorCode::Malformed, "matrix has non-finite entries");
  const double norm = frobenius_norm(t);
  if (hermitian_defect(t) > tol * norm) throw Error(ErrorCode::NotHermitian, "matrix is not Hermitian");

  const std::size_t n = t.rows();
  Matrix a = t.hermitian_part();
  Matrix v = Matrix::identity(n);
  const double target = convergence * norm;

  int sweep = 0;
  while (kernels::off_diagonal_frobenius(a) > target) {
    if (++sweep > max_sweeps) throw Error(ErrorCode::NoConvergence, "Jacobi sweeps did not converge");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        if (std::abs(apq) <= std::numeric_limits<double>::min()) continue;
        const Rotation j = jacobi_rotation(a(p, p).real(), a(q, q).real(), apq);
        rotate_columns(a, p, q, j);
        rotate_rows_adjoint(a, p, q, j);
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        rotate_columns(v, p, q, j);
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
  EigenDecomposition e;
  e.eigenvalues.reserve(n);
  for (std::size_t i : order) e.eigenvalues.push_back(a(i, i).real());
  e.basis = select_columns(v, order);
  return e;
}

Matrix spectral_function(const EigenDecomposition& e, const std::function<double(double)>& f) {
  std::vector<double> d(e.eigenvalues.size());
  std::transform(e.eigenvalues.begin(), e.eigenvalues.end(), d.begin(), f);
  return times_adjoint(scale_columns(e.basis, d), e.basis);
}

NormalEigenDecomposition normal_eigen(const Matrix& t, double tol) {
  if (!t.square()) throw Error(ErrorCode::ShapeMismatch, "normal_eigen needs a square matrix");
  const std::size_t n = t.rows();
  const double norm = std::max(frobenius_norm(t), std::numeric_limits<double>::min());
  const Matrix re = t.hermitian_part();
  const Matrix im = t.skew_part();
  const EigenDecomposition er = hermitian_eigen(re, tol);
  const double group_tol = 1e-8 * norm;

  NormalEigenDecomposition out;
  out.basis = Matrix(n, n);
  std::size_t col = 0;
  for (std::size_t start = 0; start < n;) {
    std::size_t end = start + 1;
    while (end < n && er.eigenvalues[end] - er.eigenvalues[end - 1] <= group_tol) ++end;
    const Matrix q = columns(er.basis, start, end - start);
    Matrix sub;
    kernels::gemm_adjoint_left(q, im * q, sub);
    const EigenDecomposition es = hermitian_eigen(sub.hermitian_part(), tol);
    const Matrix qs = q * es.basis;
    double mean_re = 0.0;
    for (std::size_t i = start; i < end; ++i) mean_re += er.eigenvalues[i];
    mean_re /= static_cast<double>(end - start);
    for (std::size_t j = 0; j < qs.cols(); ++j, ++col) {
      for (std::size_t i = 0; i < n; ++i) out.basis(i, col) = qs(i, j);
      out.eigenvalues.emplace_back(mean_re, es.eigenvalues[j]);
    }
    start = end;
  }

  const Matrix lam = Matrix::diagonal(std::span<const Complex>(out.eigenvalues));
  if (frobenius_norm(t * out.basis - out.basis * lam) > 1e-8 * norm) {
    throw Error(ErrorCode::NoConvergence, "matrix is not normal or its real parts are too tightly clustered");
  }
  return out;
}

SingularValueDecomposition jacobi_svd(const Matrix& t, int max_sweeps) {
  if (t.rows() > kMaxDim || t.cols() > kMaxDim) {
    throw Error(ErrorCode::ShapeMismatch, "dimension exceeds the dense backend limit");
  }
  if (!t.all_finite()) throw Error(ErrorCode::Malformed, "matrix has non-finite entries");
  const std::size_t n = t.cols();
  Matrix g = t;
  Matrix v = Matrix::identity(n);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  // columns below this squared norm are rounding noise of a rank deficiency
  const double negligible = std::pow(static_cast<double>(std::max<std::size_t>(n, 1)) * eps * frobenius_norm(t), 2);

  bool rotated = true;
  int sweep = 0;
  while (rotated) {
    if (++sweep > max_sweeps) throw Error(ErrorCode::NoConvergence, "one-sided Jacobi did not converge");
    rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0;
        Complex gamma{};
        for (std::size_t k = 0; k < g.rows(); ++k) {
          alpha += std::norm(g(k, p));
          beta += std::norm(g(k, q));
          gamma += std::conj(g(k, p)) * g(k, q);
        }
        const double mag = std::abs(gamma);
        if (mag <= eps * std::sqrt(alpha * beta) || mag <= std::numeric_limits<double>::min()) continue;
        if (alpha <= negligible || beta <= negligible) continue;
        rotated = true;
        const Rotation j = jacobi_rotation(alpha, beta, gamma);
        rotate_columns(g, p, q, j);
        rotate_columns(v, p, q, j);
      }
    }
  }

  SingularValueDecomposition out;
  out.sigma.resize(n);
  out.u = Matrix(t.rows(), n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < g.rows(); ++k) s += std::norm(g(k, j));
    s = std::sqrt(s);
    out.sigma[j] = s;
    if (s > 0.0) {
      for (std::size_t k = 0; k < g.rows(); ++k) out.u(k, j) = g(k, j) / s;
    }
  }
  out.v = std::move(v);
  return out;
}

std::vector<double> singular_values(const Matrix& t) {
  auto s = jacobi_svd(t).sigma;
  std::sort(s.begin(), s.end());
  return s;
}

double spectral_norm(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  const auto s = singular_values(a);
  return s.back();
}

Matrix positive_sqrt(const Matrix& t, double tol) {
  const EigenDecomposition e = hermitian_eigen(t, tol);
  if (e.eigenvalues.empty()) return t;
  const double scale = std::max(std::abs(e.eigenvalues.front()), std::abs(e.eigenvalues.back()));
  if (e.eigenvalues.front() < -tol * std::max(1.0, scale)) {
    throw Error(ErrorCode::NotPsd, "matrix has a negative eigenvalue");
  }
  return spectral_function(e, [](double x) { return std::sqrt(std::max(0.0, x)); }).hermitian_part();
}

PolarPair polar_decompose(const Matrix& t, double tol) {
  const SingularValueDecomposition svd = jacobi_svd(t);
  const double smax = svd.sigma.empty() ? 0.0 : *std::max_element(svd.sigma.begin(), svd.sigma.end());
  const double threshold = tol * smax;

  std::vector<double> kept(svd.sigma.size());
  for (std::size_t j = 0; j < kept.size(); ++j) kept[j] = svd.sigma[j] > threshold ? 1.0 : 0.0;

  PolarPair out;
  out.modulus = times_adjoint(scale_columns(svd.v, svd.sigma), svd.v).hermitian_part();
  out.v = times_adjoint(scale_columns(svd.u, kept), svd.v);
  return out;
}

Matrix lu_solve(const Matrix& a, const Matrix& b) {
  if (!a.square() || a.rows() != b.rows()) throw Error(ErrorCode::ShapeMismatch, "lu_solve shapes");
  const std::size_t n = a.rows();
  Matrix lu = a;
  Matrix x = b;
  double scale = 0.0;
  for (const auto& z : a.data()) scale = std::max(scale, std::abs(z));
  const double tiny = 1e-14 * std::max(scale, std::numeric_limits<double>::min());

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu(i, k)) > std::abs(lu(piv, k))) piv = i;
    }
    if (std::abs(lu(piv, k)) <= tiny) throw Error(ErrorCode::Singular, "matrix is singular to working precision");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
      for (std::size_t j = 0; j < x.cols(); ++j) std::swap(x(k, j), x(piv, j));
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex m = lu(i, k) / lu(k, k);
      lu(i, k) = m;
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= m * lu(k, j);
      for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) -= m * x(k, j);
    }
  }
  for (std::size_t kk = n; kk-- > 0;) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      Complex s = x(kk, j);
      for (std::size_t c = kk + 1; c < n; ++c) s -= lu(kk, c) * x(c, j);
      x(kk, j) = s / lu(kk, kk);
    }
  }
  return x;
}

Matrix inverse(const Matrix& a) { return lu_solve(a, Matrix::identity(a.rows())); }

}  // namespace anop

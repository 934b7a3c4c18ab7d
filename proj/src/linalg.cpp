#include "corrtherm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "corrtherm/errors.hpp"

namespace corrtherm {

Mat Mat::transposed() const {
  Mat t(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Vec matvec(const Mat& m, std::span<const double> v) {
  Vec out(m.n, 0.0);
  for (int i = 0; i < m.n; ++i) {
    double s = 0.0;
    for (int j = 0; j < m.n; ++j) s += m(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

Vec tmatvec(const Mat& m, std::span<const double> v) {
  Vec out(m.n, 0.0);
  for (int i = 0; i < m.n; ++i) {
    const double vi = v[i];
    if (vi == 0.0) continue;
    for (int j = 0; j < m.n; ++j) out[j] += m(i, j) * vi;
  }
  return out;
}

Mat matmul(const Mat& a, const Mat& b) {
  Mat c(a.n);
  for (int i = 0; i < a.n; ++i)
    for (int k = 0; k < a.n; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < a.n; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

double sup_distance(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

double accurate_sum(std::span<const double> v) {
  long double s = 0.0L;
  for (double x : v) s += x;
  return static_cast<double>(s);
}

double logsumexp(std::span<const double> v) {
  if (v.empty()) return -std::numeric_limits<double>::infinity();
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  long double s = 0.0L;
  for (double x : v) s += std::exp(static_cast<long double>(x - m));
  return m + static_cast<double>(std::log(s));
}

double shannon_entropy(std::span<const double> weights) {
  double h = 0.0;
  for (double w : weights)
    if (w > 0.0) h -= w * std::log(w);
  return h;
}

namespace {

void normalize_l1(Vec& v) {
  double s = 0.0;
  for (double x : v) s += std::fabs(x);
  if (s > 0.0)
    for (double& x : v) x /= s;
}

// Dense eigensolve for the stalled cases (reducible, defective, or tied
// dominant blocks). Picks the eigenvalue of largest modulus with a
// (numerically) real nonnegative eigenvector; Perron-Frobenius guarantees
// one exists for nonnegative A.
bool dense_dominant(const Mat& a, double tol, PowerIterResult& out) {
  const int n = a.n;
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = a(i, j);
  Eigen::EigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) return false;

  const auto& vals = es.eigenvalues();
  double rho = 0.0;
  for (int k = 0; k < n; ++k) rho = std::max(rho, std::abs(vals[k]));

  int best = -1;
  double best_imag = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    if (std::abs(vals[k]) < rho * (1.0 - 1e-9)) continue;
    const double im = std::fabs(vals[k].imag());
    if (im < best_imag) {
      best_imag = im;
      best = k;
    }
  }
  if (best < 0 || best_imag > 1e-9 * std::max(1.0, rho)) return false;

  Eigen::VectorXcd col = es.eigenvectors().col(best);
  Vec v(n);
  double mass = 0.0;
  for (int i = 0; i < n; ++i) mass += col[i].real();
  const double sign = mass >= 0.0 ? 1.0 : -1.0;
  for (int i = 0; i < n; ++i) {
    if (std::fabs(col[i].imag()) > 1e-9) return false;
    v[i] = sign * col[i].real();
    if (v[i] < 0.0) {
      if (v[i] < -1e-9) return false;
      v[i] = 0.0;
    }
  }
  normalize_l1(v);

  const double lambda = vals[best].real();
  const Vec av = matvec(a, v);
  Vec diff(n);
  for (int i = 0; i < n; ++i) diff[i] = av[i] - lambda * v[i];
  out.lambda = lambda;
  out.v = std::move(v);
  out.residual = sup_norm(diff);
  out.converged = out.residual <= 1e3 * tol * std::max(1.0, lambda);
  out.used_fallback = true;
  return out.converged;
}

}  // namespace

PowerIterResult dominant_eigenpair(const Mat& a, const PowerIterOptions& opts) {
  const int n = a.n;
  PowerIterResult res;
  Vec v(n, 1.0 / n);

  for (int it = 1; it <= opts.max_iterations; ++it) {
    Vec av = matvec(a, v);
    const double vv = dot(v, v);
    const double lambda = dot(v, av) / vv;
    double resid = 0.0;
    for (int i = 0; i < n; ++i) resid = std::max(resid, std::fabs(av[i] - lambda * v[i]));
    const double vmax = sup_norm(v);

    if (resid <= opts.tol * std::max(1.0, std::fabs(lambda)) * std::max(vmax, 1e-300)) {
      res.lambda = lambda;
      res.v = v;
      res.iterations = it;
      res.residual = resid;
      res.converged = true;
      return res;
    }

    // next iterate: (A + I) v, renormalized
    for (int i = 0; i < n; ++i) av[i] += v[i];
    normalize_l1(av);
    v = std::move(av);
    res.iterations = it;
  }

  if (opts.allow_fallback && dense_dominant(a, opts.tol, res)) {
    res.iterations = opts.max_iterations;
    return res;
  }
  throw NoConvergence(opts.max_iterations, "power iteration on nonnegative matrix");
}

Vec solve_stationary_direct(const Mat& m) {
  const int n = m.n;
  // rows of the system: (M^T - I) p = 0 with the last equation replaced by
  // sum(p) = 1.
  Eigen::MatrixXd sys(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sys(i, j) = m(j, i) - (i == j ? 1.0 : 0.0);
  for (int j = 0; j < n; ++j) sys(n - 1, j) = 1.0;
  rhs[n - 1] = 1.0;

  Eigen::VectorXd p = sys.fullPivLu().solve(rhs);
  Vec out(n);
  for (int i = 0; i < n; ++i) out[i] = std::max(0.0, p[i]);
  double s = 0.0;
  for (double x : out) s += x;
  if (s <= 0.0) throw NoConvergence(1, "direct stationary solve produced a zero vector");
  for (double& x : out) x /= s;
  return out;
}

}  // namespace corrtherm

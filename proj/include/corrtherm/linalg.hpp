#ifndef CORRTHERM_LINALG_HPP
#define CORRTHERM_LINALG_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace corrtherm {

using Vec = std::vector<double>;

// Dense square matrix, row-major. Sizes here are tiny (d <= a few dozen),
// so everything is plain loops over contiguous storage.
struct Mat {
  int n = 0;
  Vec a;

  Mat() = default;
  explicit Mat(int n_) : n(n_), a(static_cast<std::size_t>(n_) * n_, 0.0) {}

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

  Mat transposed() const;
};

Vec matvec(const Mat& m, std::span<const double> v);    // m * v
Vec tmatvec(const Mat& m, std::span<const double> v);   // m^T * v (= left action v^T m)
Mat matmul(const Mat& a, const Mat& b);

double dot(std::span<const double> a, std::span<const double> b);
double sup_norm(std::span<const double> v);
double sup_distance(std::span<const double> a, std::span<const double> b);

// Sum with long-double accumulation; used wherever mass-conservation checks
// at 1e-12 meet tens of thousands of terms.
double accurate_sum(std::span<const double> v);

double logsumexp(std::span<const double> v);

// Shannon entropy -sum w log w with the 0 log 0 = 0 convention, natural log.
double shannon_entropy(std::span<const double> weights);

struct PowerIterResult {
  double lambda = 0.0;   // Rayleigh estimate of the dominant eigenvalue of A
  Vec v;                 // eigenvector, L1-normalized, nonnegative
  int iterations = 0;
  double residual = 0.0; // ||A v - lambda v||_inf
  bool converged = false;
  bool used_fallback = false;
};

struct PowerIterOptions {
  double tol = 1e-12;      // relative residual target
  int max_iterations = 100000;
  bool allow_fallback = true;  // dense eigensolver if the iteration stalls
};

// Dominant eigenpair of a nonnegative matrix: power iteration on A + I
// (the shift removes periodicity) from the all-ones vector. Convergence is
// declared when ||Av - lambda v||_inf <= tol * max(1, lambda) with v
// L1-normalized. For defective or badly conditioned dominant eigenvalues
// the iteration can stall; then a dense eigensolve takes over (flagged in
// the result). Throws NoConvergence if neither route produces a validated
// nonnegative eigenpair.
PowerIterResult dominant_eigenpair(const Mat& a, const PowerIterOptions& opts = {});

// Solve p (M - I) = 0 with sum(p) = 1 directly (dense LU); M row-stochastic.
Vec solve_stationary_direct(const Mat& m);

}  // namespace corrtherm

#endif

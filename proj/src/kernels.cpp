#include "corrtherm/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "corrtherm/errors.hpp"
#include "corrtherm/rng.hpp"

namespace corrtherm {

ProbabilityVector::ProbabilityVector(Vec entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw ValidationError("probability vector must be nonempty");
  for (double x : entries_)
    if (!(x >= 0.0) || !std::isfinite(x))
      throw ValidationError("probability vector entries must be finite and >= 0");
  const double total = accurate_sum(entries_);
  if (std::fabs(total - 1.0) > kMassTol)
    throw ValidationError("probability vector mass differs from 1 by " +
                          std::to_string(total - 1.0));
}

ProbabilityVector ProbabilityVector::uniform(int d) {
  return ProbabilityVector(Vec(d, 1.0 / d));
}

ProbabilityVector ProbabilityVector::dirac(int d, int i) {
  if (i < 0 || i >= d) throw IndexOutOfRange(i, d);
  Vec v(d, 0.0);
  v[i] = 1.0;
  return ProbabilityVector(std::move(v));
}

TransitionKernel::TransitionKernel(int d, Vec rows_row_major,
                                   std::optional<FiniteCorrespondence> support)
    : d_(d), rows_(std::move(rows_row_major)), support_(std::move(support)) {
  if (d_ < 1) throw ValidationError("kernel needs d >= 1");
  if (rows_.size() != static_cast<std::size_t>(d_) * d_)
    throw DimensionMismatch(rows_.size(), static_cast<std::size_t>(d_) * d_);
  if (support_ && support_->states() != d_)
    throw DimensionMismatch(support_->states(), d_);
  for (int i = 0; i < d_; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < d_; ++j) {
      const double p = (*this)(i, j);
      if (!(p >= 0.0) || !std::isfinite(p))
        throw ValidationError("kernel entries must be finite and >= 0");
      if (support_ && p != 0.0 && !support_->edge(i, j)) throw SupportViolation(i, j);
      row_sum += p;
    }
    if (std::fabs(row_sum - 1.0) > kMassTol)
      throw ValidationError("kernel row " + std::to_string(i) + " sums to " +
                            std::to_string(row_sum));
  }
}

TransitionKernel TransitionKernel::dirac_map(const std::vector<int>& f) {
  const int d = static_cast<int>(f.size());
  Vec rows(static_cast<std::size_t>(d) * d, 0.0);
  for (int i = 0; i < d; ++i) {
    if (f[i] < 0 || f[i] >= d) throw IndexOutOfRange(f[i], d);
    rows[static_cast<std::size_t>(i) * d + f[i]] = 1.0;
  }
  return TransitionKernel(d, std::move(rows), FiniteCorrespondence::from_map(f));
}

TransitionKernel TransitionKernel::uniform(const FiniteCorrespondence& t) {
  const int d = t.states();
  Vec rows(static_cast<std::size_t>(d) * d, 0.0);
  for (int i = 0; i < d; ++i) {
    const double w = 1.0 / t.row_degree(i);
    for (int j : t.row_targets(i)) rows[static_cast<std::size_t>(i) * d + j] = w;
  }
  return TransitionKernel(d, std::move(rows), t);
}

TransitionKernel TransitionKernel::identity(int d) {
  Vec rows(static_cast<std::size_t>(d) * d, 0.0);
  for (int i = 0; i < d; ++i) rows[static_cast<std::size_t>(i) * d + i] = 1.0;
  return TransitionKernel(d, std::move(rows));
}

Mat TransitionKernel::matrix() const {
  Mat m(d_);
  m.a = rows_;
  return m;
}

JointDistribution::JointDistribution(int d, Vec mass_row_major)
    : d_(d), mass_(std::move(mass_row_major)) {
  if (d_ < 1) throw ValidationError("joint distribution needs d >= 1");
  if (mass_.size() != static_cast<std::size_t>(d_) * d_)
    throw DimensionMismatch(mass_.size(), static_cast<std::size_t>(d_) * d_);
  for (double x : mass_)
    if (!(x >= 0.0) || !std::isfinite(x))
      throw ValidationError("joint distribution entries must be finite and >= 0");
  const double total = accurate_sum(mass_);
  if (std::fabs(total - 1.0) > kMassTol)
    throw ValidationError("joint distribution mass differs from 1 by " +
                          std::to_string(total - 1.0));
}

ProbabilityVector pushforward(const ProbabilityVector& mu, const TransitionKernel& q) {
  if (mu.size() != q.states()) throw DimensionMismatch(mu.size(), q.states());
  const int d = q.states();
  Vec out(d, 0.0);
  for (int i = 0; i < d; ++i) {
    const double m = mu[i];
    if (m == 0.0) continue;
    for (int j = 0; j < d; ++j) out[j] += m * q(i, j);
  }
  // guard against accumulated drift; mass is conserved analytically
  const double total = accurate_sum(out);
  for (double& x : out) x /= total;
  return ProbabilityVector(std::move(out));
}

Vec pullback(const TransitionKernel& q, const Vec& f) {
  if (f.size() != static_cast<std::size_t>(q.states()))
    throw DimensionMismatch(f.size(), q.states());
  const int d = q.states();
  Vec out(d, 0.0);
  for (int i = 0; i < d; ++i) {
    double s = 0.0;
    for (int j = 0; j < d; ++j) s += q(i, j) * f[j];
    out[i] = s;
  }
  return out;
}

TransitionKernel compose(const TransitionKernel& q2, const TransitionKernel& q1) {
  if (q1.states() != q2.states()) throw DimensionMismatch(q1.states(), q2.states());
  const int d = q1.states();
  Mat prod = matmul(q2.matrix(), q1.matrix());
  // rows renormalized against drift; exact row sums are 1
  for (int i = 0; i < d; ++i) {
    double s = 0.0;
    for (int j = 0; j < d; ++j) s += prod(i, j);
    for (int j = 0; j < d; ++j) prod(i, j) /= s;
  }
  return TransitionKernel(d, std::move(prod.a));
}

double cylinder_measure(const ProbabilityVector& mu, const TransitionKernel& q,
                        const Orbit& orbit) {
  if (orbit.states.empty()) throw ValidationError("orbit must be nonempty");
  if (mu.size() != q.states()) throw DimensionMismatch(mu.size(), q.states());
  for (int x : orbit.states)
    if (x < 0 || x >= q.states()) throw IndexOutOfRange(x, q.states());
  double mass = mu[orbit.states.front()];
  for (std::size_t k = 0; k + 1 < orbit.states.size() && mass > 0.0; ++k)
    mass *= q(orbit.states[k], orbit.states[k + 1]);
  return mass;
}

ProbabilityVector stationary(const TransitionKernel& q, const StationaryOptions& opts) {
  const int d = q.states();
  const Mat m = q.matrix();

  auto residual_of = [&](const Vec& p) {
    const Vec pp = tmatvec(m, p);
    return sup_distance(pp, p);
  };

  Vec v(d, 1.0 / d);
  bool converged = false;
  for (int it = 0; it < opts.max_iterations; ++it) {
    Vec next = tmatvec(m, v);           // p -> pP
    for (int i = 0; i < d; ++i) next[i] += v[i];  // +1 diagonal shift
    double s = 0.0;
    for (double x : next) s += x;
    for (double& x : next) x /= s;
    const double step = sup_distance(next, v);
    v = std::move(next);
    if (step <= opts.tol) {
      converged = true;
      break;
    }
  }

  if (!converged || residual_of(v) > opts.residual_requirement) {
    if (d <= 64) {
      Vec direct = solve_stationary_direct(m);
      if (residual_of(direct) <= opts.residual_requirement)
        return ProbabilityVector(std::move(direct));
    }
    if (!converged) throw NoConvergence(opts.max_iterations, "stationary vector");
    throw NoConvergence(opts.max_iterations, "stationary residual above requirement");
  }
  return ProbabilityVector(std::move(v));
}

namespace {

double stationarity_residual(const ProbabilityVector& p, const TransitionKernel& q) {
  const Vec pp = tmatvec(q.matrix(), p.entries());
  return sup_distance(pp, p.entries());
}

}  // namespace

double entropy_rate(const ProbabilityVector& p, const TransitionKernel& q) {
  if (p.size() != q.states()) throw DimensionMismatch(p.size(), q.states());
  const double resid = stationarity_residual(p, q);
  if (resid > kStationaryCheckTol) throw NotStationary(resid, kStationaryCheckTol);
  const int d = q.states();
  double h = 0.0;
  for (int i = 0; i < d; ++i) {
    if (p[i] == 0.0) continue;
    for (int j = 0; j < d; ++j) {
      const double pij = q(i, j);
      if (pij > 0.0) h -= p[i] * pij * std::log(pij);
    }
  }
  return h;
}

TransitionKernel backward_kernel(const ProbabilityVector& p, const TransitionKernel& q) {
  if (p.size() != q.states()) throw DimensionMismatch(p.size(), q.states());
  const double resid = stationarity_residual(p, q);
  if (resid > kStationaryCheckTol) throw NotStationary(resid, kStationaryCheckTol);
  const int d = q.states();
  Vec rows(static_cast<std::size_t>(d) * d, 0.0);
  for (int j = 0; j < d; ++j) {
    double* row = rows.data() + static_cast<std::size_t>(j) * d;
    if (p[j] > 0.0) {
      double s = 0.0;
      for (int i = 0; i < d; ++i) {
        row[i] = p[i] * q(i, j) / p[j];
        s += row[i];
      }
      for (int i = 0; i < d; ++i) row[i] /= s;
    } else {
      // ZeroState(j): conventional row, uniform over mass-carrying
      // predecessors, else uniform over all states.
      std::vector<int> preds;
      for (int i = 0; i < d; ++i)
        if (q(i, j) > 0.0 && p[i] > 0.0) preds.push_back(i);
      if (preds.empty())
        for (int i = 0; i < d; ++i) row[i] = 1.0 / d;
      else
        for (int i : preds) row[i] = 1.0 / preds.size();
    }
  }
  return TransitionKernel(d, std::move(rows));
}

double rokhlin_entropy(const ProbabilityVector& p, const TransitionKernel& backward) {
  if (p.size() != backward.states()) throw DimensionMismatch(p.size(), backward.states());
  const int d = backward.states();
  double h = 0.0;
  for (int j = 0; j < d; ++j) {
    if (p[j] == 0.0) continue;
    std::span<const double> row(backward.rows().data() + static_cast<std::size_t>(j) * d,
                                static_cast<std::size_t>(d));
    h += p[j] * shannon_entropy(row);
  }
  return h;
}

JointDistribution edge_joint(const ProbabilityVector& p, const TransitionKernel& q) {
  if (p.size() != q.states()) throw DimensionMismatch(p.size(), q.states());
  const int d = q.states();
  Vec mass(static_cast<std::size_t>(d) * d, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) mass[static_cast<std::size_t>(i) * d + j] = p[i] * q(i, j);
  const double total = accurate_sum(mass);
  for (double& x : mass) x /= total;
  return JointDistribution(d, std::move(mass));
}

std::pair<ProbabilityVector, TransitionKernel> factor_joint(
    const JointDistribution& nu, const std::optional<FiniteCorrespondence>& support) {
  const int d = nu.states();
  if (support && support->states() != d) throw DimensionMismatch(support->states(), d);
  if (support) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (nu(i, j) != 0.0 && !support->edge(i, j)) throw SupportViolation(i, j);
  }
  Vec marginal(d, 0.0);
  for (int i = 0; i < d; ++i) {
    long double s = 0.0L;
    for (int j = 0; j < d; ++j) s += nu(i, j);
    marginal[i] = static_cast<double>(s);
  }
  Vec rows(static_cast<std::size_t>(d) * d, 0.0);
  for (int i = 0; i < d; ++i) {
    double* row = rows.data() + static_cast<std::size_t>(i) * d;
    if (marginal[i] > 0.0) {
      double s = 0.0;
      for (int j = 0; j < d; ++j) {
        row[j] = nu(i, j) / marginal[i];
        s += row[j];
      }
      for (int j = 0; j < d; ++j) row[j] /= s;
    } else if (support) {
      const double w = 1.0 / support->row_degree(i);
      for (int j : support->row_targets(i)) row[j] = w;
    } else {
      for (int j = 0; j < d; ++j) row[j] = 1.0 / d;
    }
  }
  const double total = accurate_sum(marginal);
  for (double& x : marginal) x /= total;
  return {ProbabilityVector(std::move(marginal)),
          TransitionKernel(d, std::move(rows), support)};
}

SampledPath sample_path(const ProbabilityVector& mu, const TransitionKernel& q, int n,
                        std::uint64_t seed) {
  if (mu.size() != q.states()) throw DimensionMismatch(mu.size(), q.states());
  if (n < 1) throw ValidationError("path length must be >= 1");
  const int d = q.states();
  Rng rng(seed);
  SampledPath path;
  path.seed = seed;
  path.states.reserve(n);
  int x = rng.sample(mu.entries());
  path.states.push_back(x);
  for (int k = 1; k < n; ++k) {
    std::span<const double> row(q.rows().data() + static_cast<std::size_t>(x) * d,
                                static_cast<std::size_t>(d));
    x = rng.sample(row);
    path.states.push_back(x);
  }
  return path;
}

namespace {

// empirical Shannon entropy of overlapping k-blocks, encoded base-d
double block_entropy(const std::vector<int>& states, int k, int d) {
  if (k == 0) return 0.0;
  const std::size_t count = states.size() - k + 1;
  std::unordered_map<std::uint64_t, std::uint64_t> freq;
  std::uint64_t code = 0;
  std::uint64_t modulus = 1;
  for (int i = 0; i < k; ++i) modulus *= static_cast<std::uint64_t>(d);
  for (std::size_t t = 0; t < states.size(); ++t) {
    code = (code * d + static_cast<std::uint64_t>(states[t])) % modulus;
    if (t + 1 >= static_cast<std::size_t>(k)) ++freq[code];
  }
  double h = 0.0;
  for (const auto& [_, c] : freq) {
    const double w = static_cast<double>(c) / static_cast<double>(count);
    h -= w * std::log(w);
  }
  return h;
}

}  // namespace

double block_entropy_estimate(const SampledPath& path, int k) {
  if (k < 1) throw ValidationError("block length must be >= 1");
  int d = 0;
  for (int x : path.states) d = std::max(d, x + 1);
  if (d == 0) throw ValidationError("path must be nonempty");
  if (path.states.size() < static_cast<std::size_t>(k))
    throw InsufficientData(0, 1);
  const std::uint64_t blocks = path.states.size() - k + 1;
  std::uint64_t needed = 50;
  for (int i = 0; i < k; ++i) {
    if (needed > UINT64_MAX / static_cast<std::uint64_t>(d)) throw Overflow();
    needed *= static_cast<std::uint64_t>(d);
  }
  if (blocks < needed) throw InsufficientData(blocks, needed);
  return block_entropy(path.states, k, d) - block_entropy(path.states, k - 1, d);
}

}  // namespace corrtherm

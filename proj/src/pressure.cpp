#include "corrtherm/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "corrtherm/errors.hpp"

namespace corrtherm {

Mat weighted_matrix(const FiniteCorrespondence& t, const EdgePotential& phi) {
  const int d = t.states();
  if (phi.states() != d) throw DimensionMismatch(phi.states(), d);
  Mat m(d);
  for (int i = 0; i < d; ++i)
    for (int j : t.row_targets(i)) m(i, j) = std::exp(phi(i, j));
  return m;
}

double pressure_spectral(const FiniteCorrespondence& t, const EdgePotential& phi,
                         const SpectralOptions& opts) {
  const Mat a = weighted_matrix(t, phi);
  PowerIterOptions pio;
  pio.tol = opts.tol;
  pio.max_iterations = opts.max_iterations;
  const PowerIterResult r = dominant_eigenpair(a, pio);
  return std::log(r.lambda);
}

namespace {

// log(1^T A_phi^n 1) with per-step rescaling; exact in the log domain for
// any n without overflow.
double log_orbit_sum_matrix(const FiniteCorrespondence& t, const EdgePotential& phi, int n) {
  const Mat a = weighted_matrix(t, phi);
  const int d = a.n;
  Vec v(d, 1.0);
  double log_scale = 0.0;
  for (int k = 0; k < n; ++k) {
    v = matvec(a, v);
    const double m = sup_norm(v);
    if (m == 0.0) return -std::numeric_limits<double>::infinity();
    for (double& x : v) x /= m;
    log_scale += std::log(m);
  }
  return log_scale + std::log(accurate_sum(v));
}

}  // namespace

double pressure_combinatorial_enumerated(const FiniteCorrespondence& t,
                                         const EdgePotential& phi, int n,
                                         std::uint64_t budget) {
  if (n < 1) throw ValidationError("combinatorial pressure needs n >= 1");
  const std::vector<Orbit> orbits = enumerate_orbits(t, n + 1, budget);
  Vec terms;
  terms.reserve(orbits.size());
  for (const Orbit& o : orbits) terms.push_back(birkhoff_sum(phi, o));
  return logsumexp(terms) / n;
}

double pressure_combinatorial(const FiniteCorrespondence& t, const EdgePotential& phi, int n,
                              std::uint64_t budget) {
  if (n < 1) throw ValidationError("combinatorial pressure needs n >= 1");
  const double matrix_value = log_orbit_sum_matrix(t, phi, n) / n;
  if (count_orbits(t, n) <= static_cast<u128>(budget)) {
    const double enum_value = pressure_combinatorial_enumerated(t, phi, n, budget);
    if (std::fabs(enum_value - matrix_value) > 1e-9)
      throw NumericError("combinatorial pressure routes disagree: enumeration " +
                         std::to_string(enum_value) + " vs matrix " +
                         std::to_string(matrix_value));
  }
  return matrix_value;
}

double variational_objective(const FiniteCorrespondence& t, const EdgePotential& phi,
                             const TransitionKernel& kernel) {
  const int d = t.states();
  if (kernel.states() != d) throw DimensionMismatch(kernel.states(), d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (kernel(i, j) != 0.0 && !t.edge(i, j)) throw SupportViolation(i, j);
  const ProbabilityVector p = stationary(kernel);
  double energy = 0.0;
  for (int i = 0; i < d; ++i) {
    if (p[i] == 0.0) continue;
    for (int j : t.row_targets(i))
      if (kernel(i, j) > 0.0) energy += p[i] * kernel(i, j) * phi(i, j);
  }
  return entropy_rate(p, kernel) + energy;
}

EquilibriumState equilibrium_construct(const FiniteCorrespondence& t, const EdgePotential& phi) {
  const int d = t.states();
  const Mat a = weighted_matrix(t, phi);
  const PowerIterResult eig = dominant_eigenpair(a);
  const double lambda = eig.lambda;
  const double pressure = std::log(lambda);

  const double qmax = sup_norm(eig.v);
  if (qmax <= 0.0) throw DegenerateEigenvector();
  const double zero_threshold = 1e-12 * qmax;

  Vec q(eig.v);
  std::vector<int> dominant;
  for (int i = 0; i < d; ++i) {
    if (q[i] > zero_threshold)
      dominant.push_back(i);
    else
      q[i] = 0.0;
  }
  if (dominant.empty()) throw DegenerateEigenvector();

  std::vector<std::uint8_t> in_l(d, 0);
  for (int i : dominant) in_l[i] = 1;

  Vec rows(static_cast<std::size_t>(d) * d, 0.0);
  for (int i = 0; i < d; ++i) {
    double* row = rows.data() + static_cast<std::size_t>(i) * d;
    if (in_l[i]) {
      double s = 0.0;
      for (int j : t.row_targets(i)) {
        row[j] = q[j] * a(i, j) / (lambda * q[i]);
        s += row[j];
      }
      // row sums equal 1 only up to the eigen residual; renormalize
      for (int j : t.row_targets(i)) row[j] /= s;
    } else {
      const double w = 1.0 / t.row_degree(i);
      for (int j : t.row_targets(i)) row[j] = w;
    }
  }
  TransitionKernel kernel(d, std::move(rows), t);

  // stationary vector of the dominant block, padded with zeros
  const int l = static_cast<int>(dominant.size());
  Vec block(static_cast<std::size_t>(l) * l, 0.0);
  for (int bi = 0; bi < l; ++bi) {
    double s = 0.0;
    for (int bj = 0; bj < l; ++bj) {
      block[static_cast<std::size_t>(bi) * l + bj] = kernel(dominant[bi], dominant[bj]);
      s += block[static_cast<std::size_t>(bi) * l + bj];
    }
    for (int bj = 0; bj < l; ++bj) block[static_cast<std::size_t>(bi) * l + bj] /= s;
  }
  const ProbabilityVector p_block = stationary(TransitionKernel(l, std::move(block)));
  Vec p_full(d, 0.0);
  for (int bi = 0; bi < l; ++bi) p_full[dominant[bi]] = p_block[bi];
  ProbabilityVector p(std::move(p_full));

  double energy = 0.0;
  for (int i : dominant)
    for (int j : t.row_targets(i))
      if (kernel(i, j) > 0.0) energy += p[i] * kernel(i, j) * phi(i, j);
  const double value = entropy_rate(p, kernel) + energy;
  const double gap = pressure - value;
  if (std::fabs(gap) > 1e-8)
    throw NumericError("equilibrium construction misses the pressure by " +
                       std::to_string(gap));

  EquilibriumState state{std::move(p), std::move(kernel), value, pressure, gap,
                         std::move(dominant), !t.is_irreducible()};
  return state;
}

namespace {

struct LogitParam {
  // one logit per allowed edge of rows with >= 2 targets
  std::vector<std::pair<int, int>> edges;
  Vec theta;
};

TransitionKernel kernel_from_logits(const FiniteCorrespondence& t, const LogitParam& param) {
  const int d = t.states();
  Vec rows(static_cast<std::size_t>(d) * d, 0.0);
  std::size_t idx = 0;
  for (int i = 0; i < d; ++i) {
    const auto& targets = t.row_targets(i);
    double* row = rows.data() + static_cast<std::size_t>(i) * d;
    if (targets.size() == 1) {
      row[targets[0]] = 1.0;
      continue;
    }
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < targets.size(); ++k)
      mx = std::max(mx, param.theta[idx + k]);
    double s = 0.0;
    for (std::size_t k = 0; k < targets.size(); ++k) {
      row[targets[k]] = std::exp(param.theta[idx + k] - mx);
      s += row[targets[k]];
    }
    for (int j : targets) row[j] /= s;
    idx += targets.size();
  }
  return TransitionKernel(d, std::move(rows), t);
}

LogitParam logits_of(const FiniteCorrespondence& t, const TransitionKernel& kernel) {
  LogitParam param;
  for (int i = 0; i < t.states(); ++i) {
    const auto& targets = t.row_targets(i);
    if (targets.size() == 1) continue;
    for (int j : targets) {
      param.edges.emplace_back(i, j);
      param.theta.push_back(std::log(std::max(kernel(i, j), 1e-18)));
    }
  }
  return param;
}

}  // namespace

OptimizeResult variational_optimize(const FiniteCorrespondence& t, const EdgePotential& phi,
                                    const OptimizeOptions& opts) {
  const TransitionKernel start = opts.start ? *opts.start : TransitionKernel::uniform(t);
  LogitParam param = logits_of(t, start);

  auto objective = [&](const LogitParam& p) {
    return variational_objective(t, phi, kernel_from_logits(t, p));
  };

  double best = objective(param);
  if (param.theta.empty())  // single-valued map: only one supported kernel
    return {kernel_from_logits(t, param), best, 0, true};

  const std::size_t m = param.theta.size();
  double step = opts.initial_step;
  int it = 0;
  bool converged = false;
  for (; it < opts.max_iterations; ++it) {
    // central-difference gradient on the logits
    Vec grad(m, 0.0);
    double gnorm = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      LogitParam probe = param;
      probe.theta[k] += opts.fd_step;
      const double up = objective(probe);
      probe.theta[k] = param.theta[k] - opts.fd_step;
      const double dn = objective(probe);
      grad[k] = (up - dn) / (2.0 * opts.fd_step);
      gnorm = std::max(gnorm, std::fabs(grad[k]));
    }
    if (gnorm < 1e-10) {
      converged = true;
      break;
    }

    // backtracking line search along the gradient
    bool improved = false;
    double gain = 0.0;
    double trial_step = step;
    for (int half = 0; half < 40 && !improved; ++half) {
      LogitParam trial = param;
      for (std::size_t k = 0; k < m; ++k) trial.theta[k] += trial_step * grad[k];
      const double value = objective(trial);
      if (value > best) {
        gain = value - best;
        param = std::move(trial);
        best = value;
        improved = true;
        step = trial_step * 2.0;
      } else {
        trial_step *= 0.5;
      }
    }
    // no uphill step, or a negligible one: first-order stationary
    if (!improved || gain < opts.improvement_tol) {
      converged = true;
      break;
    }
  }
  return {kernel_from_logits(t, param), best, it, converged};
}

PressureReport verify_vp(const FiniteCorrespondence& t, const EdgePotential& phi, int n_max,
                         std::uint64_t budget, const OptimizeOptions& opt) {
  PressureReport report{.spectral = pressure_spectral(t, phi),
                        .combinatorial = {},
                        .constructed = equilibrium_construct(t, phi),
                        .optimizer = variational_optimize(t, phi, opt),
                        .phi_sup_norm = phi.sup_norm()};
  for (int n = 1; n <= n_max; ++n)
    report.combinatorial.emplace_back(n, pressure_combinatorial(t, phi, n, budget));
  report.optimizer_below_spectral = report.optimizer.value <= report.spectral + 1e-9;
  report.constructed_attains_spectral =
      std::fabs(report.constructed.value - report.spectral) <= 1e-8;
  report.lower_bound_holds = report.spectral >= -report.phi_sup_norm - 1e-12;
  return report;
}

}  // namespace corrtherm

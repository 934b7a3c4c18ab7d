#ifndef CORRTHERM_PRESSURE_HPP
#define CORRTHERM_PRESSURE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "corrtherm/correspondence.hpp"
#include "corrtherm/kernels.hpp"
#include "corrtherm/linalg.hpp"

namespace corrtherm {

// entry (i,j) = a_ij * exp(phi(i,j))
Mat weighted_matrix(const FiniteCorrespondence& t, const EdgePotential& phi);

struct SpectralOptions {
  double tol = 1e-12;
  int max_iterations = 100000;
};

// log of the spectral radius of the weighted matrix.
double pressure_spectral(const FiniteCorrespondence& t, const EdgePotential& phi,
                         const SpectralOptions& opts = {});

// (1/n) log sum over orbits of length n+1 of exp(S_n phi), evaluated by
// log-domain matrix powers; when the orbit count fits the budget the
// explicit-enumeration route is computed too and both must agree to 1e-9.
double pressure_combinatorial(const FiniteCorrespondence& t, const EdgePotential& phi, int n,
                              std::uint64_t budget = kDefaultOrbitBudget);

// Same quantity by explicit orbit enumeration only; throws BudgetExceeded.
double pressure_combinatorial_enumerated(const FiniteCorrespondence& t,
                                         const EdgePotential& phi, int n,
                                         std::uint64_t budget = kDefaultOrbitBudget);

// entropy_rate(stationary(P), P) + sum p_i P_ij phi(i,j); P must be
// supported by t.
double variational_objective(const FiniteCorrespondence& t, const EdgePotential& phi,
                             const TransitionKernel& kernel);

struct EquilibriumState {
  ProbabilityVector p;
  TransitionKernel kernel;
  double value = 0.0;     // entropy rate + potential energy
  double pressure = 0.0;  // log spectral radius
  double gap = 0.0;       // pressure - value
  std::vector<int> dominant_states;  // L: states carrying eigenvector mass
  bool maybe_not_unique = false;     // reducible adjacency
};

// The explicit equilibrium state: right eigenvector q of the weighted
// matrix, kernel p_ij = q_j a_ij e^{phi}/(lambda q_i) on rows with q_i > 0
// (uniform over the row image otherwise), stationary vector of the
// dominant block padded with zeros.
EquilibriumState equilibrium_construct(const FiniteCorrespondence& t, const EdgePotential& phi);

struct OptimizeOptions {
  int max_iterations = 5000;
  double fd_step = 1e-5;        // central-difference step on logits
  double initial_step = 0.5;    // gradient-ascent step before backtracking
  double improvement_tol = 1e-12;
  std::optional<TransitionKernel> start;  // default: uniform rows
};

struct OptimizeResult {
  TransitionKernel kernel;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;  // false: best iterate returned with a warning
};

// Independent maximization of the variational objective over kernels
// supported by t (softmax edge-logit parametrization, finite-difference
// gradient ascent with backtracking). A verifier for the spectral value,
// not a substitute for the construction.
OptimizeResult variational_optimize(const FiniteCorrespondence& t, const EdgePotential& phi,
                                    const OptimizeOptions& opts = {});

struct PressureReport {
  double spectral = 0.0;
  std::vector<std::pair<int, double>> combinatorial;  // (n, estimate)
  EquilibriumState constructed;
  OptimizeResult optimizer;
  double phi_sup_norm = 0.0;
  // asserted invariants
  bool optimizer_below_spectral = false;   // optimizer <= spectral + 1e-9
  bool constructed_attains_spectral = false;  // |value - spectral| <= 1e-8
  bool lower_bound_holds = false;          // spectral >= -||phi||_inf
  bool all_passed() const {
    return optimizer_below_spectral && constructed_attains_spectral && lower_bound_holds;
  }
};

PressureReport verify_vp(const FiniteCorrespondence& t, const EdgePotential& phi, int n_max,
                         std::uint64_t budget = kDefaultOrbitBudget,
                         const OptimizeOptions& opt = {});

}  // namespace corrtherm

#endif

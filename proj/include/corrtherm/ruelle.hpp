#ifndef CORRTHERM_RUELLE_HPP
#define CORRTHERM_RUELLE_HPP

#include <cstdint>
#include <vector>

#include "corrtherm/correspondence.hpp"
#include "corrtherm/linalg.hpp"

namespace corrtherm {

struct TransferSpectrum {
  double lambda = 0.0;
  Vec right;  // q: A_phi q = lambda q, normalized to sum 1
  Vec left;   // u: u A_phi = lambda u, normalized to sum 1
  double right_residual = 0.0;
  double left_residual = 0.0;
  int right_iterations = 0;
  int left_iterations = 0;
  bool unique = false;  // uniqueness asserted only for primitive adjacency
};

// (L v)(x1) = sum over preimages x0 of v(x0) exp(phi(x0,x1)), i.e. A_phi^T v.
Vec transfer_apply(const FiniteCorrespondence& t, const EdgePotential& phi, const Vec& v);

TransferSpectrum pf_spectrum(const FiniteCorrespondence& t, const EdgePotential& phi);

struct PowerConvergence {
  std::vector<Vec> iterates;  // lambda^{-k} L^k(1), k = 1..n
  Vec sup_distances;          // distance to the limit eigenfunction
  Vec limit;                  // u scaled so the eigenmeasure integral is 1
  bool converged = false;
};

// The iterates of the normalized transfer operator on the constant
// function 1, with sup-distances to the eigenfunction they converge to on
// primitive instances.
PowerConvergence power_convergence(const FiniteCorrespondence& t, const EdgePotential& phi,
                                   int n);

// Eigenmeasure mass of the cylinder [x_1..x_{n+1}]:
// lambda^{-n} e^{S_n phi} q_{x_{n+1}} / sum(q).
double eigenmeasure_cylinder(const TransferSpectrum& s, const FiniteCorrespondence& t,
                             const EdgePotential& phi, const Orbit& orbit);

// Equilibrium mass u_{x_1} e^{S_n phi} lambda^{-n} q_{x_{n+1}} / sum_k u_k q_k;
// agrees with the Markov cylinder of the constructed equilibrium state.
double equilibrium_cylinder(const TransferSpectrum& s, const FiniteCorrespondence& t,
                            const EdgePotential& phi, const Orbit& orbit);

struct GibbsResult {
  double constant = 0.0;
  Orbit witness;
};

// Smallest c >= 0 with |log m[cyl] - (S_n phi - n P)| <= c over all
// cylinders of length <= n_max+1, found by exhaustive scan (capped at
// 10^6 cylinders). Requires a primitive adjacency.
GibbsResult gibbs_constant(const FiniteCorrespondence& t, const EdgePotential& phi, int n_max,
                           std::uint64_t scan_cap = 1000000);

struct CylinderRow {
  Orbit orbit;
  double m_mass = 0.0;      // eigenmeasure
  double mu_mass = 0.0;     // equilibrium measure
  double gibbs_dev = 0.0;   // log m - (S_n phi - n P)
};

// One row per cylinder of length n+1.
std::vector<CylinderRow> cylinder_table(const FiniteCorrespondence& t, const EdgePotential& phi,
                                        int n, std::uint64_t cap = 1000000);

}  // namespace corrtherm

#endif

#ifndef CORRTHERM_KERNELS_HPP
#define CORRTHERM_KERNELS_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "corrtherm/correspondence.hpp"
#include "corrtherm/linalg.hpp"

namespace corrtherm {

inline constexpr double kMassTol = 1e-12;        // row/total mass slack
inline constexpr double kStationaryCheckTol = 1e-8;

class ProbabilityVector {
 public:
  // Validates nonnegativity and total mass 1 within kMassTol.
  explicit ProbabilityVector(Vec entries);

  static ProbabilityVector uniform(int d);
  static ProbabilityVector dirac(int d, int i);

  int size() const { return static_cast<int>(entries_.size()); }
  double operator[](int i) const { return entries_[i]; }
  const Vec& entries() const { return entries_; }

 private:
  Vec entries_;
};

// Row-stochastic matrix, optionally tied to a support correspondence
// (p_ij = 0 wherever the adjacency is 0).
class TransitionKernel {
 public:
  TransitionKernel(int d, Vec rows_row_major,
                   std::optional<FiniteCorrespondence> support = std::nullopt);

  static TransitionKernel dirac_map(const std::vector<int>& f);
  // Uniform over each row's image set, supported by t.
  static TransitionKernel uniform(const FiniteCorrespondence& t);
  static TransitionKernel identity(int d);

  int states() const { return d_; }
  double operator()(int i, int j) const {
    return rows_[static_cast<std::size_t>(i) * d_ + j];
  }
  const Vec& rows() const { return rows_; }
  const std::optional<FiniteCorrespondence>& support() const { return support_; }

  Mat matrix() const;

 private:
  int d_;
  Vec rows_;
  std::optional<FiniteCorrespondence> support_;
};

// Joint distribution on state pairs (measure on X^2).
class JointDistribution {
 public:
  JointDistribution(int d, Vec mass_row_major);
  int states() const { return d_; }
  double operator()(int i, int j) const {
    return mass_[static_cast<std::size_t>(i) * d_ + j];
  }
  const Vec& mass() const { return mass_; }

 private:
  int d_;
  Vec mass_;
};

struct SampledPath {
  std::vector<int> states;
  std::uint64_t seed = 0;
};

// (mu Q)_j = sum_i mu_i p_ij
ProbabilityVector pushforward(const ProbabilityVector& mu, const TransitionKernel& q);

// (Q f)_i = sum_j p_ij f_j
Vec pullback(const TransitionKernel& q, const Vec& f);

// Matrix product q2 * q1; the kernel of "q2 first, then q1" acting on measures.
TransitionKernel compose(const TransitionKernel& q2, const TransitionKernel& q1);

// mu(x_1) * prod p_{x_k x_{k+1}}; zero-probability edges give 0, no error.
double cylinder_measure(const ProbabilityVector& mu, const TransitionKernel& q,
                        const Orbit& orbit);

struct StationaryOptions {
  double tol = 1e-12;
  int max_iterations = 100000;
  double residual_requirement = 1e-10;  // ||pP - p||_inf on the result
};

// Fixed probability vector of the left action p -> pP. Power iteration on
// P^T with +1 diagonal shift and uniform start; direct linear solve as a
// fallback for d <= 64.
ProbabilityVector stationary(const TransitionKernel& q, const StationaryOptions& opts = {});

// -sum p_i p_ij log p_ij (natural log, 0 log 0 = 0). Checks that p is
// stationary within kStationaryCheckTol; throws NotStationary.
double entropy_rate(const ProbabilityVector& p, const TransitionKernel& q);

// Time-reversal kernel R_{ji} = p_i p_ij / p_j. Rows at states with p_j = 0
// default to uniform over predecessors carrying mass (uniform over all
// states when there are none); such rows are conventional, the reversal
// identity p_j R_ji = p_i P_ij only holds on states with mass.
TransitionKernel backward_kernel(const ProbabilityVector& p, const TransitionKernel& q);

// sum_j p_j H(R_j): the entropy of (p,P) computed from the backward kernel.
double rokhlin_entropy(const ProbabilityVector& p, const TransitionKernel& backward);

// nu_ij = p_i P_ij, the joint law of one step started from p.
JointDistribution edge_joint(const ProbabilityVector& p, const TransitionKernel& q);

// Disintegration nu_ij = mu_i Q_ij with mu the first marginal. Rows with
// mu_i = 0 are uniform over the support row (or over all states without a
// support). Throws SupportViolation if nu charges a disallowed edge.
std::pair<ProbabilityVector, TransitionKernel> factor_joint(
    const JointDistribution& nu,
    const std::optional<FiniteCorrespondence>& support = std::nullopt);

// x_1 ~ mu, x_{k+1} ~ row Q_{x_k}; deterministic given the seed.
SampledPath sample_path(const ProbabilityVector& mu, const TransitionKernel& q, int n,
                        std::uint64_t seed);

// Plug-in entropy estimate H_k - H_{k-1} from empirical k-block
// frequencies; alphabet size is taken from the largest symbol on the path.
// Throws InsufficientData when fewer than 50 * d^k blocks are available.
double block_entropy_estimate(const SampledPath& path, int k);

}  // namespace corrtherm

#endif

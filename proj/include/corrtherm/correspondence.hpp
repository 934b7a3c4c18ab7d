#ifndef CORRTHERM_CORRESPONDENCE_HPP
#define CORRTHERM_CORRESPONDENCE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace corrtherm {

inline constexpr std::uint64_t kDefaultOrbitBudget = 1000000;

using u128 = unsigned __int128;
std::string u128_to_string(u128 value);

// Finite correspondence on states {0..d-1}: a (0,1)-adjacency matrix with
// every row nonempty. State i maps to the set {j : a_ij = 1}.
class FiniteCorrespondence {
 public:
  // Validates d >= 1 and that every row has an image; throws EmptyRow.
  FiniteCorrespondence(int d, std::vector<std::uint8_t> adjacency_row_major);

  // Correspondence induced by a single-valued map i -> f[i].
  static FiniteCorrespondence from_map(const std::vector<int>& f);
  static FiniteCorrespondence full_shift(int d);

  int states() const { return d_; }
  bool edge(int i, int j) const { return adj_[static_cast<std::size_t>(i) * d_ + j] != 0; }
  const std::vector<std::uint8_t>& adjacency() const { return adj_; }

  int row_degree(int i) const;
  const std::vector<int>& row_targets(int i) const { return targets_[i]; }

  // Transpose; requires every column nonempty (throws NotSurjective).
  FiniteCorrespondence inverse() const;

  bool is_irreducible() const;  // adjacency digraph strongly connected
  bool is_primitive() const;    // some power entrywise positive (Wielandt bound)

  bool operator==(const FiniteCorrespondence& o) const {
    return d_ == o.d_ && adj_ == o.adj_;
  }

 private:
  int d_;
  std::vector<std::uint8_t> adj_;
  std::vector<std::vector<int>> targets_;  // per-row image lists, ascending
};

// A finite orbit (x_1,...,x_n): consecutive pairs must be allowed edges.
struct Orbit {
  std::vector<int> states;

  int length() const { return static_cast<int>(states.size()); }
  std::string to_string() const;  // dash-joined 1-based indices
};

// Checks every consecutive pair against T; throws DisallowedEdge.
void check_orbit(const FiniteCorrespondence& t, const Orbit& orbit);

// Real weights on the allowed edges of one correspondence.
class EdgePotential {
 public:
  // All-zero potential on the edges of t.
  explicit EdgePotential(const FiniteCorrespondence& t);
  // values[i*d+j] read exactly on allowed edges; must be finite there.
  EdgePotential(const FiniteCorrespondence& t, const std::vector<double>& values);

  static EdgePotential constant(const FiniteCorrespondence& t, double value);

  int states() const { return d_; }
  bool edge(int i, int j) const { return adj_[static_cast<std::size_t>(i) * d_ + j] != 0; }

  // phi(i,j); throws DisallowedEdge off the edge set.
  double operator()(int i, int j) const;

  double sup_norm() const;  // max |phi| over edges

  // Conjugate potential phi-bar(i,j) = phi(j,i) on the inverse correspondence.
  EdgePotential conjugate() const;
  EdgePotential shifted(double c) const;

  void set(int i, int j, double value);  // throws DisallowedEdge

 private:
  int d_;
  std::vector<std::uint8_t> adj_;
  std::vector<double> values_;
};

// All orbits of length n in lexicographic order (depth-first by state
// index). Throws BudgetExceeded if the orbit count (1^T A^{n-1} 1) tops
// the cap before any path is materialized.
std::vector<Orbit> enumerate_orbits(const FiniteCorrespondence& t, int n,
                                    std::uint64_t budget = kDefaultOrbitBudget);

// Exact number of orbits with n edges (length n+1), i.e. 1^T A^n 1, in
// checked 128-bit arithmetic; throws Overflow.
u128 count_orbits(const FiniteCorrespondence& t, int n);

// S_n phi along the orbit: sum of phi over consecutive pairs (empty sum for
// a length-1 orbit).
double birkhoff_sum(const EdgePotential& phi, const Orbit& orbit);

}  // namespace corrtherm

#endif

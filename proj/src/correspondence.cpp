#include "corrtherm/correspondence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "corrtherm/errors.hpp"

namespace corrtherm {

namespace {
constexpr u128 kMaxU128 = ~static_cast<u128>(0);
}

std::string u128_to_string(u128 value) {
  if (value == 0) return "0";
  std::string s;
  while (value != 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

FiniteCorrespondence::FiniteCorrespondence(int d, std::vector<std::uint8_t> adjacency_row_major)
    : d_(d), adj_(std::move(adjacency_row_major)) {
  if (d_ < 1) throw ValidationError("state count must be >= 1");
  if (adj_.size() != static_cast<std::size_t>(d_) * d_)
    throw DimensionMismatch(adj_.size(), static_cast<std::size_t>(d_) * d_);
  for (auto& x : adj_) x = x ? 1 : 0;
  targets_.resize(d_);
  for (int i = 0; i < d_; ++i) {
    for (int j = 0; j < d_; ++j)
      if (edge(i, j)) targets_[i].push_back(j);
    if (targets_[i].empty()) throw EmptyRow(i);
  }
}

FiniteCorrespondence FiniteCorrespondence::from_map(const std::vector<int>& f) {
  const int d = static_cast<int>(f.size());
  if (d < 1) throw ValidationError("map must have at least one state");
  std::vector<std::uint8_t> adj(static_cast<std::size_t>(d) * d, 0);
  for (int i = 0; i < d; ++i) {
    if (f[i] < 0 || f[i] >= d) throw IndexOutOfRange(f[i], d);
    adj[static_cast<std::size_t>(i) * d + f[i]] = 1;
  }
  return FiniteCorrespondence(d, std::move(adj));
}

FiniteCorrespondence FiniteCorrespondence::full_shift(int d) {
  return FiniteCorrespondence(d, std::vector<std::uint8_t>(static_cast<std::size_t>(d) * d, 1));
}

int FiniteCorrespondence::row_degree(int i) const {
  return static_cast<int>(targets_[i].size());
}

FiniteCorrespondence FiniteCorrespondence::inverse() const {
  for (int j = 0; j < d_; ++j) {
    bool nonempty = false;
    for (int i = 0; i < d_; ++i)
      if (edge(i, j)) {
        nonempty = true;
        break;
      }
    if (!nonempty) throw NotSurjective(j);
  }
  std::vector<std::uint8_t> t(static_cast<std::size_t>(d_) * d_, 0);
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j)
      if (edge(i, j)) t[static_cast<std::size_t>(j) * d_ + i] = 1;
  return FiniteCorrespondence(d_, std::move(t));
}

namespace {

// reachability from state 0 along `edge(i,j)` or its transpose
bool all_reachable(const FiniteCorrespondence& t, bool transpose) {
  const int d = t.states();
  std::vector<std::uint8_t> seen(d, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int i = stack.back();
    stack.pop_back();
    for (int j = 0; j < d; ++j) {
      const bool e = transpose ? t.edge(j, i) : t.edge(i, j);
      if (e && !seen[j]) {
        seen[j] = 1;
        ++count;
        stack.push_back(j);
      }
    }
  }
  return count == d;
}

}  // namespace

bool FiniteCorrespondence::is_irreducible() const {
  return all_reachable(*this, false) && all_reachable(*this, true);
}

bool FiniteCorrespondence::is_primitive() const {
  if (!is_irreducible()) return false;
  const int d = d_;
  if (d == 1) return edge(0, 0);
  // boolean powers A^k up to the Wielandt bound d^2 - 2d + 2
  const int bound = d * d - 2 * d + 2;
  std::vector<std::uint8_t> pw(adj_);
  for (int k = 1; k <= bound; ++k) {
    if (std::all_of(pw.begin(), pw.end(), [](std::uint8_t x) { return x != 0; })) return true;
    if (k == bound) break;
    std::vector<std::uint8_t> nx(static_cast<std::size_t>(d) * d, 0);
    for (int i = 0; i < d; ++i)
      for (int l = 0; l < d; ++l) {
        if (!pw[static_cast<std::size_t>(i) * d + l]) continue;
        for (int j : targets_[l]) nx[static_cast<std::size_t>(i) * d + j] = 1;
      }
    pw = std::move(nx);
  }
  return false;
}

std::string Orbit::to_string() const {
  std::string s;
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (k) s.push_back('-');
    s += std::to_string(states[k] + 1);
  }
  return s;
}

void check_orbit(const FiniteCorrespondence& t, const Orbit& orbit) {
  if (orbit.states.empty()) throw ValidationError("orbit must be nonempty");
  for (int x : orbit.states)
    if (x < 0 || x >= t.states()) throw IndexOutOfRange(x, t.states());
  for (std::size_t k = 0; k + 1 < orbit.states.size(); ++k)
    if (!t.edge(orbit.states[k], orbit.states[k + 1]))
      throw DisallowedEdge(orbit.states[k], orbit.states[k + 1]);
}

EdgePotential::EdgePotential(const FiniteCorrespondence& t)
    : d_(t.states()), adj_(t.adjacency()), values_(adj_.size(), 0.0) {}

EdgePotential::EdgePotential(const FiniteCorrespondence& t, const std::vector<double>& values)
    : EdgePotential(t) {
  if (values.size() != adj_.size()) throw DimensionMismatch(values.size(), adj_.size());
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * d_ + j;
      if (adj_[idx]) {
        if (!std::isfinite(values[idx]))
          throw ValidationError("potential must be finite on every edge");
        values_[idx] = values[idx];
      }
    }
}

EdgePotential EdgePotential::constant(const FiniteCorrespondence& t, double value) {
  EdgePotential phi(t);
  for (std::size_t k = 0; k < phi.adj_.size(); ++k)
    if (phi.adj_[k]) phi.values_[k] = value;
  return phi;
}

double EdgePotential::operator()(int i, int j) const {
  const std::size_t idx = static_cast<std::size_t>(i) * d_ + j;
  if (i < 0 || i >= d_ || j < 0 || j >= d_ || !adj_[idx]) throw DisallowedEdge(i, j);
  return values_[idx];
}

double EdgePotential::sup_norm() const {
  double m = 0.0;
  for (std::size_t k = 0; k < adj_.size(); ++k)
    if (adj_[k]) m = std::max(m, std::fabs(values_[k]));
  return m;
}

EdgePotential EdgePotential::conjugate() const {
  EdgePotential out(*this);
  std::vector<std::uint8_t> tadj(adj_.size(), 0);
  std::vector<double> tval(values_.size(), 0.0);
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j) {
      const std::size_t src = static_cast<std::size_t>(i) * d_ + j;
      const std::size_t dst = static_cast<std::size_t>(j) * d_ + i;
      if (adj_[src]) {
        tadj[dst] = 1;
        tval[dst] = values_[src];
      }
    }
  out.adj_ = std::move(tadj);
  out.values_ = std::move(tval);
  return out;
}

EdgePotential EdgePotential::shifted(double c) const {
  EdgePotential out(*this);
  for (std::size_t k = 0; k < out.adj_.size(); ++k)
    if (out.adj_[k]) out.values_[k] += c;
  return out;
}

void EdgePotential::set(int i, int j, double value) {
  const std::size_t idx = static_cast<std::size_t>(i) * d_ + j;
  if (i < 0 || i >= d_ || j < 0 || j >= d_ || !adj_[idx]) throw DisallowedEdge(i, j);
  if (!std::isfinite(value)) throw ValidationError("potential must be finite on every edge");
  values_[idx] = value;
}

u128 count_orbits(const FiniteCorrespondence& t, int n) {
  if (n < 0) throw ValidationError("orbit count needs n >= 0");
  const int d = t.states();
  std::vector<u128> cur(d, 1);
  for (int step = 0; step < n; ++step) {
    std::vector<u128> nx(d, 0);
    for (int i = 0; i < d; ++i) {
      if (cur[i] == 0) continue;
      for (int j : t.row_targets(i)) {
        if (nx[j] > kMaxU128 - cur[i]) throw Overflow();
        nx[j] += cur[i];
      }
    }
    cur = std::move(nx);
  }
  u128 total = 0;
  for (u128 x : cur) {
    if (total > kMaxU128 - x) throw Overflow();
    total += x;
  }
  return total;
}

std::vector<Orbit> enumerate_orbits(const FiniteCorrespondence& t, int n, std::uint64_t budget) {
  if (n < 1) throw ValidationError("orbit enumeration needs n >= 1");
  const u128 total = count_orbits(t, n - 1);
  if (total > static_cast<u128>(budget)) throw BudgetExceeded(u128_to_string(total));

  std::vector<Orbit> out;
  out.reserve(static_cast<std::size_t>(total));
  std::vector<int> path;
  path.reserve(n);

  // iterative DFS, children visited in ascending state order
  struct Frame {
    int state;
    int next_child;
  };
  for (int start = 0; start < t.states(); ++start) {
    std::vector<Frame> stack{{start, 0}};
    path.assign(1, start);
    while (!stack.empty()) {
      if (static_cast<int>(path.size()) == n) {
        out.push_back(Orbit{path});
        stack.pop_back();
        path.pop_back();
        continue;
      }
      Frame& f = stack.back();
      const auto& targets = t.row_targets(f.state);
      if (f.next_child < static_cast<int>(targets.size())) {
        const int child = targets[f.next_child++];
        stack.push_back({child, 0});
        path.push_back(child);
      } else {
        stack.pop_back();
        path.pop_back();
      }
    }
  }
  return out;
}

double birkhoff_sum(const EdgePotential& phi, const Orbit& orbit) {
  if (orbit.states.empty()) throw ValidationError("orbit must be nonempty");
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < orbit.states.size(); ++k)
    s += phi(orbit.states[k], orbit.states[k + 1]);
  return s;
}

}  // namespace corrtherm

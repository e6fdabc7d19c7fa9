#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "balance/signed_graph.hpp"
#include "balance/triad_census.hpp"

namespace balance {

/// 3x3 count table indexed by state_index(from), state_index(to).
template <typename State>
struct TransitionTable {
  std::array<std::array<std::uint64_t, 3>, 3> c{};

  std::uint64_t& at(State from, State to) { return c[state_index(from)][state_index(to)]; }
  std::uint64_t at(State from, State to) const { return c[state_index(from)][state_index(to)]; }

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (const auto& row : c)
      for (auto v : row) t += v;
    return t;
  }

  std::uint64_t off_diagonal() const { return total() - c[0][0] - c[1][1] - c[2][2]; }

  std::uint64_t row_total(State from) const {
    const auto& row = c[state_index(from)];
    return row[0] + row[1] + row[2];
  }

  friend bool operator==(const TransitionTable&, const TransitionTable&) = default;
};

struct EdgeTransitionCounts : TransitionTable<EdgeState> {
  std::uint64_t n_dyads = 0;
  friend bool operator==(const EdgeTransitionCounts&, const EdgeTransitionCounts&) = default;
};

struct TriadTransitionCounts : TransitionTable<TriadState> {
  std::uint64_t n_triples = 0;
  friend bool operator==(const TriadTransitionCounts&, const TriadTransitionCounts&) = default;
};

struct TriadTransitionMatrix {
  std::array<std::array<double, 3>, 3> w{};
  std::array<bool, 3> defined{};

  double at(TriadState from, TriadState to) const { return w[state_index(from)][state_index(to)]; }
  bool row_defined(TriadState from) const { return defined[state_index(from)]; }
};

/// The three balance-dynamics statistics; nullopt where the source row is undefined.
struct BalanceDynamicsStats {
  std::optional<double> escape_from_imbalance;  // w(-1 -> +1) + w(-1 -> 0)
  std::optional<double> closure_bias;           // w(0 -> +1) - w(0 -> -1)
  std::optional<double> balanced_persistence;   // w(+1 -> +1)

  friend bool operator==(const BalanceDynamicsStats&, const BalanceDynamicsStats&) = default;
};

/// Dense symmetric edge-state matrix over local node indices.
class StateMatrix {
 public:
  StateMatrix() = default;

  explicit StateMatrix(const SignedGraph& g) : n_(g.node_count()), cells_(n_ * n_, EdgeState::Absent) {
    for (const auto& e : g.local_edges()) set(e.u, e.v, e.sign);
  }

  std::size_t size() const { return n_; }
  EdgeState get(std::size_t u, std::size_t v) const { return cells_[u * n_ + v]; }
  const EdgeState* row(std::size_t u) const { return cells_.data() + u * n_; }

  void set(std::size_t u, std::size_t v, EdgeState s) {
    cells_[u * n_ + v] = s;
    cells_[v * n_ + u] = s;
  }

 private:
  std::size_t n_ = 0;
  std::vector<EdgeState> cells_;
};

/// Dyad over local indices, u < v, ordered lexicographically.
struct LocalDyad {
  std::uint32_t u = 0;
  std::uint32_t v = 0;

  friend auto operator<=>(const LocalDyad&, const LocalDyad&) = default;
};

namespace detail {

inline void require_same_nodes(const SignedGraph& prev, const SignedGraph& curr) {
  if (prev.nodes() != curr.nodes())
    throw NodeSetMismatch("node sets of years " + std::to_string(prev.year()) + " and " + std::to_string(curr.year()) +
                          " differ; restrict with common_subgraphs first");
}

/// Triad transitions when `curr` differs from `prev` exactly on `changed` (sorted, duplicate-free).
/// Only triples touching a changed dyad can move; the rest keep their year t-1 state.
inline TriadTransitionCounts delta_triad_counts(const StateMatrix& prev, const StateMatrix& curr,
                                                std::span<const LocalDyad> changed, const TriadCensus& prev_census) {
  TriadTransitionCounts out;
  const std::size_t n = prev.size();
  out.n_triples = choose3(n);
  std::array<std::uint64_t, 3> touched{};
  for (const auto& d : changed) {
    const std::uint32_t a = d.u, b = d.v;
    const EdgeState* prev_a = prev.row(a);
    const EdgeState* prev_b = prev.row(b);
    const EdgeState* curr_a = curr.row(a);
    const EdgeState* curr_b = curr.row(b);
    const EdgeState prev_ab = prev_a[b], curr_ab = curr_a[b];
    for (std::uint32_t w = 0; w < n; ++w) {
      if (w == a || w == b) continue;
      // A triple touching several changed dyads is counted from the smallest one: (a, w) precedes (a, b)
      // iff w < b, and (b, w) precedes (a, b) iff w < a.
      if (w < b && prev_a[w] != curr_a[w]) continue;
      if (w < a && prev_b[w] != curr_b[w]) continue;
      const auto from = classify_triad(prev_ab, prev_a[w], prev_b[w]);
      const auto to = classify_triad(curr_ab, curr_a[w], curr_b[w]);
      ++out.at(from, to);
      ++touched[state_index(from)];
    }
  }
  for (std::size_t s = 0; s < 3; ++s) {
    const auto state = triad_state_from_index(s);
    out.c[s][s] += prev_census.count(state) - touched[s];
  }
  return out;
}

}  // namespace detail

inline EdgeTransitionCounts edge_transition_counts(const SignedGraph& prev, const SignedGraph& curr) {
  detail::require_same_nodes(prev, curr);
  EdgeTransitionCounts out;
  out.n_dyads = choose2(prev.node_count());
  std::uint64_t touched = 0;
  for (const auto& [dyad, sign] : prev.edges()) {
    ++out.at(sign, curr.edge_state(dyad));
    ++touched;
  }
  for (const auto& [dyad, sign] : curr.edges()) {
    if (prev.edges().contains(dyad)) continue;
    ++out.at(EdgeState::Absent, sign);
    ++touched;
  }
  out.at(EdgeState::Absent, EdgeState::Absent) = out.n_dyads - touched;
  return out;
}

inline TriadTransitionCounts triad_transition_counts(const SignedGraph& prev, const SignedGraph& curr) {
  detail::require_same_nodes(prev, curr);
  const StateMatrix before(prev), after(curr);
  std::vector<LocalDyad> changed;
  for (const auto& e : prev.local_edges())
    if (after.get(e.u, e.v) != e.sign) changed.push_back({e.u, e.v});
  for (const auto& e : curr.local_edges())
    if (before.get(e.u, e.v) == EdgeState::Absent) changed.push_back({e.u, e.v});
  std::sort(changed.begin(), changed.end());
  return detail::delta_triad_counts(before, after, changed, census(prev));
}

inline TriadTransitionMatrix triad_transition_probabilities(const TriadTransitionCounts& counts) {
  TriadTransitionMatrix m;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& row = counts.c[i];
    const std::uint64_t total = row[0] + row[1] + row[2];
    m.defined[i] = total > 0;
    if (!m.defined[i]) continue;
    for (std::size_t j = 0; j < 3; ++j) m.w[i][j] = static_cast<double>(row[j]) / static_cast<double>(total);
  }
  return m;
}

inline BalanceDynamicsStats balance_dynamics_stats(const TriadTransitionMatrix& w) {
  using enum TriadState;
  BalanceDynamicsStats s;
  if (w.row_defined(Imbalanced)) s.escape_from_imbalance = w.at(Imbalanced, Balanced) + w.at(Imbalanced, Open);
  if (w.row_defined(Open)) s.closure_bias = w.at(Open, Balanced) - w.at(Open, Imbalanced);
  if (w.row_defined(Balanced)) s.balanced_persistence = w.at(Balanced, Balanced);
  return s;
}

inline BalanceDynamicsStats balance_dynamics_stats(const SignedGraph& prev, const SignedGraph& curr) {
  return balance_dynamics_stats(triad_transition_probabilities(triad_transition_counts(prev, curr)));
}

}  // namespace balance

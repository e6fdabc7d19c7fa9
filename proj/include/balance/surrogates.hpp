#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "balance/parallel.hpp"
#include "balance/signed_graph.hpp"
#include "balance/transitions.hpp"
#include "balance/triad_census.hpp"

namespace balance {

struct SurrogateConfig {
  std::size_t n_samples = 1000;
  std::uint64_t master_seed = 0;
  unsigned threads = 1;  // 0 = hardware concurrency

  void validate() const {
    if (n_samples < 1) throw InvalidArgument("n_samples must be at least 1");
  }
};

using Rng = std::mt19937_64;

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Uniformly random k-permutation of positions [0, m) without materializing [0, m).
class SparseShuffle {
 public:
  std::vector<std::uint32_t> draw(std::uint32_t m, std::uint32_t k, Rng& rng) {
    swapped_.clear();
    std::vector<std::uint32_t> picks(k);
    for (std::uint32_t i = 0; i < k; ++i) {
      std::uniform_int_distribution<std::uint32_t> dist(i, m - 1);
      const std::uint32_t j = dist(rng);
      const std::uint32_t at_i = value(i), at_j = value(j);
      swapped_[j] = at_i;
      swapped_[i] = at_j;
      picks[i] = at_j;
    }
    return picks;
  }

 private:
  std::uint32_t value(std::uint32_t pos) const {
    auto it = swapped_.find(pos);
    return it == swapped_.end() ? pos : it->second;
  }

  std::unordered_map<std::uint32_t, std::uint32_t> swapped_;
};

inline std::vector<LocalEdge> shuffled_signs(std::span<const LocalEdge> edges, Rng& rng) {
  std::vector<EdgeState> signs;
  signs.reserve(edges.size());
  for (const auto& e : edges) signs.push_back(e.sign);
  std::shuffle(signs.begin(), signs.end(), rng);
  std::vector<LocalEdge> out(edges.begin(), edges.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i].sign = signs[i];
  return out;
}

}  // namespace detail

/// Per-sample seed from (master seed, year, sample index); independent of execution order.
constexpr std::uint64_t derive_seed(std::uint64_t master_seed, int year, std::uint64_t sample) {
  std::uint64_t s = detail::splitmix64(master_seed);
  s = detail::splitmix64(s ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(year)));
  return detail::splitmix64(s ^ sample);
}

/// Same topology, same sign counts, signs assigned to dyads by a uniformly random permutation.
inline SignedGraph shuffle_signs(const SignedGraph& g, std::uint64_t seed) {
  Rng rng(seed);
  const auto shuffled = detail::shuffled_signs(g.local_edges(), rng);
  std::vector<std::pair<Dyad, EdgeState>> edges;
  edges.reserve(shuffled.size());
  const auto& nodes = g.nodes();
  for (const auto& e : shuffled) edges.emplace_back(Dyad(nodes[e.u], nodes[e.v]), e.sign);
  return SignedGraph(g.year(), nodes, edges);
}

/// Fraction of balanced triads for each sign-shuffle surrogate of g, in sample-index order.
inline std::vector<double> sample_static(const SignedGraph& g, const SurrogateConfig& cfg,
                                         Denominator den = Denominator::Closed) {
  cfg.validate();
  const auto& edges = g.local_edges();
  if (census(g).closed() == 0) throw NoClosedTriads("no closed triads in year " + std::to_string(g.year()));
  std::vector<double> out(cfg.n_samples);
  detail::parallel_for_blocks(cfg.n_samples, cfg.threads, 16, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      Rng rng(derive_seed(cfg.master_seed, g.year(), k));
      const auto shuffled = detail::shuffled_signs(edges, rng);
      const Adjacency adj(g.node_count(), shuffled);
      // Topology is fixed, so every surrogate has as many closed triads as g.
      out[k] = fraction_balanced(census(adj, shuffled), den);
    }
  });
  return out;
}

/// Null model for one year of growth: dyads are grouped by their year t-1 state and, within each
/// group, the empirical destination states are reassigned to dyads by a uniform random permutation.
class GrowthNull {
 public:
  using Change = std::pair<LocalDyad, EdgeState>;

  GrowthNull(const SignedGraph& prev, const SignedGraph& curr)
      : year_(curr.year()), nodes_(prev.nodes()), prev_(prev), prev_census_(census(prev)) {
    detail::require_same_nodes(prev, curr);
    const StateMatrix after(curr);
    const std::size_t n = prev.node_count();
    for (std::uint32_t u = 0; u < n; ++u) {
      for (std::uint32_t v = u + 1; v < n; ++v) {
        const EdgeState from = prev_.get(u, v), to = after.get(u, v);
        auto& cls = classes_[state_index(from)];
        cls.members.push_back({u, v});
        if (from != to) cls.moves.push_back(to);
        ++empirical_.at(from, to);
      }
    }
    empirical_.n_dyads = choose2(n);
    for (auto& cls : classes_) std::sort(cls.moves.begin(), cls.moves.end());
  }

  int year() const { return year_; }
  const std::vector<NodeId>& nodes() const { return nodes_; }
  const EdgeTransitionCounts& empirical_transitions() const { return empirical_; }
  bool has_transitions() const { return empirical_.off_diagonal() > 0; }

  /// Dyads that change state in one surrogate, sorted.
  std::vector<Change> draw(Rng& rng, detail::SparseShuffle& shuffle) const {
    std::vector<Change> changes;
    changes.reserve(empirical_.off_diagonal());
    for (const auto& cls : classes_) {
      if (cls.moves.empty()) continue;
      const auto picks = shuffle.draw(static_cast<std::uint32_t>(cls.members.size()),
                                      static_cast<std::uint32_t>(cls.moves.size()), rng);
      for (std::size_t i = 0; i < picks.size(); ++i) changes.emplace_back(cls.members[picks[i]], cls.moves[i]);
    }
    std::sort(changes.begin(), changes.end());
    return changes;
  }

  std::vector<Change> draw(std::uint64_t seed) const {
    Rng rng(seed);
    detail::SparseShuffle shuffle;
    return draw(rng, shuffle);
  }

  /// Year-t surrogate graph for a set of changes.
  SignedGraph materialize(std::span<const Change> changes) const {
    StateMatrix m = prev_;
    for (const auto& [d, to] : changes) m.set(d.u, d.v, to);
    std::vector<std::pair<Dyad, EdgeState>> edges;
    for (std::uint32_t u = 0; u < m.size(); ++u)
      for (std::uint32_t v = u + 1; v < m.size(); ++v)
        if (m.get(u, v) != EdgeState::Absent) edges.emplace_back(Dyad(nodes_[u], nodes_[v]), m.get(u, v));
    return SignedGraph(year_, nodes_, edges);
  }

  /// Triad transitions from year t-1 to the surrogate; `scratch` must equal the year t-1 matrix
  /// on entry and is restored before returning.
  TriadTransitionCounts triad_transitions(std::span<const Change> changes, StateMatrix& scratch) const {
    std::vector<LocalDyad> changed;
    changed.reserve(changes.size());
    for (const auto& [d, to] : changes) {
      scratch.set(d.u, d.v, to);
      changed.push_back(d);
    }
    auto counts = detail::delta_triad_counts(prev_, scratch, changed, prev_census_);
    for (const auto& [d, to] : changes) scratch.set(d.u, d.v, prev_.get(d.u, d.v));
    return counts;
  }

  const StateMatrix& prev_matrix() const { return prev_; }

 private:
  struct SourceClass {
    std::vector<LocalDyad> members;
    std::vector<EdgeState> moves;  // destinations different from the source, sorted
  };

  int year_;
  std::vector<NodeId> nodes_;
  StateMatrix prev_;
  TriadCensus prev_census_;
  std::array<SourceClass, 3> classes_;
  EdgeTransitionCounts empirical_;
};

/// Surrogate year-t snapshot preserving the edge transition counts from prev to curr.
inline SignedGraph shuffle_growth(const SignedGraph& prev, const SignedGraph& curr, std::uint64_t seed) {
  const GrowthNull null(prev, curr);
  return null.materialize(null.draw(seed));
}

/// Balance-dynamics statistics for each growth surrogate, in sample-index order.
inline std::vector<BalanceDynamicsStats> sample_growth(const GrowthNull& null, const SurrogateConfig& cfg) {
  cfg.validate();
  if (!null.has_transitions())
    throw NothingToRandomize("no edge state transitions into year " + std::to_string(null.year()));
  std::vector<BalanceDynamicsStats> out(cfg.n_samples);
  detail::parallel_for_blocks(cfg.n_samples, cfg.threads, 16, [&](std::size_t begin, std::size_t end) {
    StateMatrix scratch = null.prev_matrix();
    detail::SparseShuffle shuffle;
    for (std::size_t k = begin; k < end; ++k) {
      Rng rng(derive_seed(cfg.master_seed, null.year(), k));
      const auto changes = null.draw(rng, shuffle);
      out[k] = balance_dynamics_stats(triad_transition_probabilities(null.triad_transitions(changes, scratch)));
    }
  });
  return out;
}

inline std::vector<BalanceDynamicsStats> sample_growth(const SignedGraph& prev, const SignedGraph& curr,
                                                       const SurrogateConfig& cfg) {
  return sample_growth(GrowthNull(prev, curr), cfg);
}

}  // namespace balance

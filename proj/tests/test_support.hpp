#pragma once

// Generators and brute-force oracles shared by the unit and acceptance suites. The oracles only use
// SignedGraph::edge_state lookups and count negative edges directly, never the bitset or delta paths.

#include <algorithm>
#include <array>
#include <map>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "balance/balance.hpp"

namespace balance::testing {

inline NodeId N(std::uint32_t v) { return NodeId{v}; }

inline std::vector<NodeId> node_range(std::uint32_t n, std::uint32_t offset = 0) {
  std::vector<NodeId> out;
  for (std::uint32_t i = 0; i < n; ++i) out.push_back(N(i + offset));
  return out;
}

constexpr EdgeState P = EdgeState::Positive;
constexpr EdgeState M = EdgeState::Negative;
constexpr EdgeState O = EdgeState::Absent;

/// Erdos-Renyi style signed graph on nodes 0..n-1.
inline SignedGraph random_signed_graph(std::mt19937_64& rng, std::uint32_t n, double density, double positive_ratio,
                                       int year = 2000) {
  std::bernoulli_distribution edge(density), positive(positive_ratio);
  std::vector<std::pair<Dyad, EdgeState>> edges;
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = a + 1; b < n; ++b)
      if (edge(rng)) edges.emplace_back(Dyad(N(a), N(b)), positive(rng) ? P : M);
  return SignedGraph(year, node_range(n), edges);
}

/// Next-year graph: each dyad independently re-drawn with probability `churn`.
inline SignedGraph perturb(std::mt19937_64& rng, const SignedGraph& g, double churn, double density,
                           double positive_ratio) {
  std::bernoulli_distribution change(churn), edge(density), positive(positive_ratio);
  std::vector<std::pair<Dyad, EdgeState>> edges;
  const auto& nodes = g.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      const Dyad d(nodes[i], nodes[j]);
      EdgeState s = g.edge_state(d);
      if (change(rng)) s = edge(rng) ? (positive(rng) ? P : M) : O;
      if (s != O) edges.emplace_back(d, s);
    }
  }
  return SignedGraph(g.year() + 1, nodes, edges);
}

/// Classification by counting negatives, written independently of classify_triad.
inline int oracle_triad_state(EdgeState ab, EdgeState bc, EdgeState ac) {
  int negatives = 0;
  for (EdgeState s : {ab, bc, ac}) {
    if (s == O) return 0;
    if (s == M) ++negatives;
  }
  return (negatives == 0 || negatives == 2) ? 1 : -1;
}

struct OracleCensus {
  std::uint64_t balanced = 0, imbalanced = 0, open = 0;
};

inline OracleCensus oracle_census(const SignedGraph& g) {
  OracleCensus c;
  const auto& v = g.nodes();
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      for (std::size_t k = j + 1; k < v.size(); ++k) {
        const int s = oracle_triad_state(g.edge_state(Dyad(v[i], v[j])), g.edge_state(Dyad(v[j], v[k])),
                                         g.edge_state(Dyad(v[i], v[k])));
        (s == 1 ? c.balanced : s == -1 ? c.imbalanced : c.open)++;
      }
  return c;
}

/// counts[from + 1][to + 1] over all dyads.
inline std::array<std::array<std::uint64_t, 3>, 3> oracle_edge_transitions(const SignedGraph& prev,
                                                                          const SignedGraph& curr) {
  std::array<std::array<std::uint64_t, 3>, 3> c{};
  const auto& v = prev.nodes();
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      const Dyad d(v[i], v[j]);
      ++c[static_cast<int>(prev.edge_state(d)) + 1][static_cast<int>(curr.edge_state(d)) + 1];
    }
  return c;
}

/// counts[from + 1][to + 1] over all node triples.
inline std::array<std::array<std::uint64_t, 3>, 3> oracle_triad_transitions(const SignedGraph& prev,
                                                                           const SignedGraph& curr) {
  std::array<std::array<std::uint64_t, 3>, 3> c{};
  const auto& v = prev.nodes();
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      for (std::size_t k = j + 1; k < v.size(); ++k) {
        const Dyad ij(v[i], v[j]), jk(v[j], v[k]), ik(v[i], v[k]);
        const int from = oracle_triad_state(prev.edge_state(ij), prev.edge_state(jk), prev.edge_state(ik));
        const int to = oracle_triad_state(curr.edge_state(ij), curr.edge_state(jk), curr.edge_state(ik));
        ++c[from + 1][to + 1];
      }
  return c;
}

/// Complete graph whose nodes are split into two factions: positive inside, negative across.
inline SignedGraph two_faction_complete(std::uint32_t n, std::uint32_t first_faction, int year = 2000) {
  std::vector<std::pair<Dyad, EdgeState>> edges;
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = a + 1; b < n; ++b)
      edges.emplace_back(Dyad(N(a), N(b)), ((a < first_faction) == (b < first_faction)) ? P : M);
  return SignedGraph(year, node_range(n), edges);
}

/// Every way to place a multiset of labels on `slots` positions, as label-per-slot vectors.
template <typename Label>
void enumerate_arrangements(std::vector<Label> labels, std::size_t slots, Label filler,
                            std::vector<std::vector<Label>>& out) {
  labels.resize(slots, filler);
  std::sort(labels.begin(), labels.end());
  do {
    out.push_back(labels);
  } while (std::next_permutation(labels.begin(), labels.end()));
}

/// Upper-tail p-value of Pearson's chi-square statistic for observed counts against expected probabilities.
template <typename Key>
double chi_square_p_value(const std::map<Key, std::uint64_t>& observed, const std::map<Key, double>& expected) {
  std::uint64_t total = 0;
  for (const auto& [k, n] : observed) total += n;
  double statistic = 0.0;
  for (const auto& [k, p] : expected) {
    const double e = p * static_cast<double>(total);
    const auto it = observed.find(k);
    const double o = it == observed.end() ? 0.0 : static_cast<double>(it->second);
    statistic += (o - e) * (o - e) / e;
  }
  for (const auto& [k, n] : observed)
    if (!expected.contains(k)) return 0.0;  // outcome outside the support
  if (expected.size() < 2) return 1.0;
  boost::math::chi_squared dist(static_cast<double>(expected.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

}  // namespace balance::testing

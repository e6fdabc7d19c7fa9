#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <string>

#include "balance/signed_graph.hpp"

namespace balance {

enum class TriadState : std::int8_t { Imbalanced = -1, Open = 0, Balanced = 1 };

/// Row/column index in 3x3 triad tables: Imbalanced, Open, Balanced.
constexpr std::size_t state_index(TriadState s) { return static_cast<std::size_t>(static_cast<int>(s) + 1); }

constexpr TriadState triad_state_from_index(std::size_t i) { return static_cast<TriadState>(static_cast<int>(i) - 1); }

inline const char* to_string(TriadState s) {
  switch (s) {
    case TriadState::Imbalanced: return "imbalanced";
    case TriadState::Open: return "open";
    case TriadState::Balanced: return "balanced";
  }
  return "?";
}

/// A closed triad is balanced iff the product of its signs is positive.
constexpr TriadState classify_triad(EdgeState ab, EdgeState bc, EdgeState ac) {
  if (ab == EdgeState::Absent || bc == EdgeState::Absent || ac == EdgeState::Absent) return TriadState::Open;
  const int product = static_cast<int>(ab) * static_cast<int>(bc) * static_cast<int>(ac);
  return product > 0 ? TriadState::Balanced : TriadState::Imbalanced;
}

constexpr std::uint64_t choose2(std::uint64_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }
constexpr std::uint64_t choose3(std::uint64_t n) { return n < 3 ? 0 : n * (n - 1) * (n - 2) / 6; }

struct TriadCensus {
  std::uint64_t n_balanced = 0;
  std::uint64_t n_imbalanced = 0;
  std::uint64_t n_open = 0;
  std::uint64_t n_triples = 0;

  std::uint64_t closed() const { return n_balanced + n_imbalanced; }

  std::uint64_t count(TriadState s) const {
    switch (s) {
      case TriadState::Balanced: return n_balanced;
      case TriadState::Imbalanced: return n_imbalanced;
      case TriadState::Open: return n_open;
    }
    return 0;
  }

  friend bool operator==(const TriadCensus&, const TriadCensus&) = default;
};

namespace detail {

/// popcount(a & b) restricted to bit positions > `after`.
inline std::uint64_t count_common_after(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                                        std::size_t after) {
  const std::size_t first = after + 1;
  std::size_t word = first / 64;
  if (word >= a.size()) return 0;
  std::uint64_t total = 0;
  const std::uint64_t head_mask = ~std::uint64_t{0} << (first % 64);
  total += static_cast<std::uint64_t>(std::popcount(a[word] & b[word] & head_mask));
  for (++word; word < a.size(); ++word) total += static_cast<std::uint64_t>(std::popcount(a[word] & b[word]));
  return total;
}

}  // namespace detail

/// Census over bitset adjacency. Each triangle u < v < w is counted once from its edge (u, v).
inline TriadCensus census(const Adjacency& adj, std::span<const LocalEdge> edges) {
  TriadCensus c;
  c.n_triples = choose3(adj.size());
  for (const auto& e : edges) {
    const auto pu = adj.positive_row(e.u), nu = adj.negative_row(e.u);
    const auto pv = adj.positive_row(e.v), nv = adj.negative_row(e.v);
    // Third-vertex pairs with an even number of negatives (++ or --) keep the sign of (u, v).
    const std::uint64_t even = detail::count_common_after(pu, pv, e.v) + detail::count_common_after(nu, nv, e.v);
    const std::uint64_t odd = detail::count_common_after(pu, nv, e.v) + detail::count_common_after(nu, pv, e.v);
    if (e.sign == EdgeState::Positive) {
      c.n_balanced += even;
      c.n_imbalanced += odd;
    } else {
      c.n_balanced += odd;
      c.n_imbalanced += even;
    }
  }
  c.n_open = c.n_triples - c.closed();
  return c;
}

inline TriadCensus census(const SignedGraph& g) { return census(g.adjacency(), g.local_edges()); }

/// Denominator used for the fraction of balanced triads.
enum class Denominator { Closed, AllTriples };

inline double fraction_balanced(const TriadCensus& c, Denominator den = Denominator::Closed) {
  if (c.closed() == 0) throw NoClosedTriads("no closed triads");
  const auto denom = den == Denominator::Closed ? c.closed() : c.n_triples;
  return static_cast<double>(c.n_balanced) / static_cast<double>(denom);
}

inline double fraction_balanced(const SignedGraph& g, Denominator den = Denominator::Closed) {
  const auto c = census(g);
  if (c.closed() == 0) throw NoClosedTriads("no closed triads in year " + std::to_string(g.year()));
  return fraction_balanced(c, den);
}

}  // namespace balance

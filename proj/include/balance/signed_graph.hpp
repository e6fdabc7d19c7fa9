#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "balance/errors.hpp"

namespace balance {

/// Stable node identity inside a TemporalNetwork's registry.
struct NodeId {
  std::uint32_t value = 0;

  friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

/// Unordered pair of distinct nodes, stored canonically with a < b.
class Dyad {
 public:
  Dyad(NodeId x, NodeId y) : a_(std::min(x, y)), b_(std::max(x, y)) {
    if (x == y) throw InvalidArgument("dyad endpoints must differ (node " + std::to_string(x.value) + ")");
  }

  NodeId a() const { return a_; }
  NodeId b() const { return b_; }

  friend auto operator<=>(const Dyad&, const Dyad&) = default;

 private:
  NodeId a_;
  NodeId b_;
};

struct DyadHash {
  std::size_t operator()(const Dyad& d) const noexcept {
    std::uint64_t key = (std::uint64_t{d.a().value} << 32) | d.b().value;
    key ^= key >> 33;
    key *= 0xff51afd7ed558ccdULL;
    key ^= key >> 33;
    return static_cast<std::size_t>(key);
  }
};

enum class EdgeState : std::int8_t { Negative = -1, Absent = 0, Positive = 1 };

/// Row/column index of a state in 3x3 transition tables: Negative, Absent, Positive.
constexpr std::size_t state_index(EdgeState s) { return static_cast<std::size_t>(static_cast<int>(s) + 1); }

constexpr EdgeState edge_state_from_index(std::size_t i) { return static_cast<EdgeState>(static_cast<int>(i) - 1); }

inline const char* to_string(EdgeState s) {
  switch (s) {
    case EdgeState::Positive: return "+";
    case EdgeState::Negative: return "-";
    case EdgeState::Absent: return "0";
  }
  return "?";
}

/// Edge between local node indices (positions in SignedGraph::nodes()), u < v.
struct LocalEdge {
  std::uint32_t u = 0;
  std::uint32_t v = 0;
  EdgeState sign = EdgeState::Positive;

  friend bool operator==(const LocalEdge&, const LocalEdge&) = default;
};

/// Bitset adjacency over local indices: one positive row and one negative row per node.
class Adjacency {
 public:
  Adjacency(std::size_t n, std::span<const LocalEdge> edges)
      : n_(n), words_((n + 63) / 64), positive_(n * words_, 0), negative_(n * words_, 0) {
    for (const auto& e : edges) {
      auto& rows = e.sign == EdgeState::Positive ? positive_ : negative_;
      rows[e.u * words_ + e.v / 64] |= std::uint64_t{1} << (e.v % 64);
      rows[e.v * words_ + e.u / 64] |= std::uint64_t{1} << (e.u % 64);
    }
  }

  std::size_t size() const { return n_; }
  std::size_t words() const { return words_; }

  std::span<const std::uint64_t> positive_row(std::size_t u) const {
    return {positive_.data() + u * words_, words_};
  }
  std::span<const std::uint64_t> negative_row(std::size_t u) const {
    return {negative_.data() + u * words_, words_};
  }

  EdgeState state(std::size_t u, std::size_t v) const {
    const std::uint64_t bit = std::uint64_t{1} << (v % 64);
    if (positive_[u * words_ + v / 64] & bit) return EdgeState::Positive;
    if (negative_[u * words_ + v / 64] & bit) return EdgeState::Negative;
    return EdgeState::Absent;
  }

 private:
  std::size_t n_;
  std::size_t words_;
  std::vector<std::uint64_t> positive_;
  std::vector<std::uint64_t> negative_;
};

/// One yearly snapshot. Immutable after construction; copies share the lazily built adjacency.
class SignedGraph {
 public:
  SignedGraph() : SignedGraph(0, std::vector<NodeId>{}, std::span<const std::pair<Dyad, EdgeState>>{}) {}

  SignedGraph(int year, std::vector<NodeId> nodes, std::span<const std::pair<Dyad, EdgeState>> edges)
      : year_(year), nodes_(std::move(nodes)), cache_(std::make_shared<Cache>()) {
    std::sort(nodes_.begin(), nodes_.end());
    if (std::adjacent_find(nodes_.begin(), nodes_.end()) != nodes_.end())
      throw InvalidArgument("duplicate node in snapshot for year " + std::to_string(year));
    edges_.reserve(edges.size());
    for (const auto& [dyad, sign] : edges) {
      if (sign == EdgeState::Absent) continue;
      if (!contains(dyad.a()) || !contains(dyad.b()))
        throw EndpointNotInGraph(describe(dyad) + " has an endpoint outside the node set of year " +
                                 std::to_string(year));
      if (!edges_.emplace(dyad, sign).second)
        throw InvalidArgument("multi-edge " + describe(dyad) + " in year " + std::to_string(year));
    }
  }

  SignedGraph(int year, std::vector<NodeId> nodes, std::initializer_list<std::pair<Dyad, EdgeState>> edges)
      : SignedGraph(year, std::move(nodes), std::span<const std::pair<Dyad, EdgeState>>(edges.begin(), edges.size())) {}

  int year() const { return year_; }
  const std::vector<NodeId>& nodes() const { return nodes_; }
  const std::unordered_map<Dyad, EdgeState, DyadHash>& edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  bool contains(NodeId id) const { return std::binary_search(nodes_.begin(), nodes_.end(), id); }

  /// Position of a node in nodes(); throws if absent.
  std::uint32_t local_index(NodeId id) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id);
    if (it == nodes_.end() || *it != id)
      throw EndpointNotInGraph("node " + std::to_string(id.value) + " not in graph for year " + std::to_string(year_));
    return static_cast<std::uint32_t>(it - nodes_.begin());
  }

  EdgeState edge_state(const Dyad& d) const {
    if (!contains(d.a()) || !contains(d.b()))
      throw EndpointNotInGraph(describe(d) + " has an endpoint outside the graph for year " + std::to_string(year_));
    auto it = edges_.find(d);
    return it == edges_.end() ? EdgeState::Absent : it->second;
  }

  /// Edges in local indices, sorted by (u, v).
  const std::vector<LocalEdge>& local_edges() const {
    build_cache();
    return cache_->edges;
  }

  const Adjacency& adjacency() const {
    build_cache();
    return *cache_->adjacency;
  }

  /// Edges as (dyad, sign), sorted by dyad.
  std::vector<std::pair<Dyad, EdgeState>> sorted_edges() const {
    std::vector<std::pair<Dyad, EdgeState>> out(edges_.begin(), edges_.end());
    std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
    return out;
  }

  friend bool operator==(const SignedGraph& l, const SignedGraph& r) {
    return l.year_ == r.year_ && l.nodes_ == r.nodes_ && l.edges_ == r.edges_;
  }

 private:
  struct Cache {
    std::once_flag once;
    std::vector<LocalEdge> edges;
    std::unique_ptr<Adjacency> adjacency;
  };

  static std::string describe(const Dyad& d) {
    return "dyad (" + std::to_string(d.a().value) + "," + std::to_string(d.b().value) + ")";
  }

  void build_cache() const {
    std::call_once(cache_->once, [this] {
      auto& out = cache_->edges;
      out.reserve(edges_.size());
      for (const auto& [dyad, sign] : edges_) out.push_back({local_index(dyad.a()), local_index(dyad.b()), sign});
      std::sort(out.begin(), out.end(), [](const LocalEdge& l, const LocalEdge& r) {
        return std::pair(l.u, l.v) < std::pair(r.u, r.v);
      });
      cache_->adjacency = std::make_unique<Adjacency>(nodes_.size(), out);
    });
  }

  int year_;
  std::vector<NodeId> nodes_;
  std::unordered_map<Dyad, EdgeState, DyadHash> edges_;
  std::shared_ptr<Cache> cache_;
};

inline EdgeState edge_state(const SignedGraph& g, const Dyad& d) { return g.edge_state(d); }

inline std::size_t node_count(const SignedGraph& g) { return g.node_count(); }

inline double average_degree(const SignedGraph& g) {
  if (g.node_count() == 0) throw EmptyGraph("average degree of an empty graph (year " + std::to_string(g.year()) + ")");
  return 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.node_count());
}

struct EdgeCounts {
  std::size_t positive = 0;
  std::size_t negative = 0;

  std::size_t total() const { return positive + negative; }
  friend bool operator==(const EdgeCounts&, const EdgeCounts&) = default;
};

inline EdgeCounts edge_counts(const SignedGraph& g) {
  EdgeCounts c;
  for (const auto& [dyad, sign] : g.edges()) (sign == EdgeState::Positive ? c.positive : c.negative)++;
  return c;
}

inline double fraction_positive_edges(const SignedGraph& g) {
  const auto c = edge_counts(g);
  if (c.total() == 0) throw NoEdges("no edges in year " + std::to_string(g.year()));
  return static_cast<double>(c.positive) / static_cast<double>(c.total());
}

/// Restricts two consecutive snapshots to the nodes present in both.
inline std::pair<SignedGraph, SignedGraph> common_subgraphs(const SignedGraph& prev, const SignedGraph& curr) {
  if (prev.year() + 1 != curr.year())
    throw NonConsecutiveYears("years " + std::to_string(prev.year()) + " and " + std::to_string(curr.year()) +
                              " are not consecutive");
  std::vector<NodeId> common;
  std::set_intersection(prev.nodes().begin(), prev.nodes().end(), curr.nodes().begin(), curr.nodes().end(),
                        std::back_inserter(common));
  auto restrict = [&common](const SignedGraph& g) {
    if (common.size() == g.node_count()) return g;
    std::vector<std::pair<Dyad, EdgeState>> kept;
    for (const auto& [dyad, sign] : g.edges()) {
      if (std::binary_search(common.begin(), common.end(), dyad.a()) &&
          std::binary_search(common.begin(), common.end(), dyad.b()))
        kept.emplace_back(dyad, sign);
    }
    return SignedGraph(g.year(), common, kept);
  };
  return {restrict(prev), restrict(curr)};
}

/// Labels for node ids. Ids are dense, assigned in registration order.
class NodeRegistry {
 public:
  NodeRegistry() = default;

  /// Registry with ids assigned in sorted label order, so canonical dyad order matches label order.
  static NodeRegistry from_labels(std::vector<std::string> labels) {
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    NodeRegistry r;
    for (auto& l : labels) r.add(std::move(l));
    return r;
  }

  NodeId add(std::string label) {
    if (label.empty()) throw InvalidArgument("node label must be non-empty");
    if (auto it = index_.find(label); it != index_.end()) return it->second;
    NodeId id{static_cast<std::uint32_t>(labels_.size())};
    index_.emplace(label, id);
    labels_.push_back(std::move(label));
    return id;
  }

  const std::string& label(NodeId id) const {
    if (id.value >= labels_.size()) throw InvalidArgument("unknown node id " + std::to_string(id.value));
    return labels_[id.value];
  }

  std::optional<NodeId> find(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }

  friend bool operator==(const NodeRegistry& l, const NodeRegistry& r) { return l.labels_ == r.labels_; }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
};

/// Contiguous year -> snapshot sequence sharing one node registry.
class TemporalNetwork {
 public:
  TemporalNetwork(NodeRegistry registry, int start_year, std::vector<SignedGraph> snapshots)
      : registry_(std::move(registry)), start_year_(start_year), snapshots_(std::move(snapshots)) {
    if (snapshots_.empty()) throw InvalidArgument("temporal network needs at least one year");
    for (std::size_t i = 0; i < snapshots_.size(); ++i) {
      const int expected = start_year_ + static_cast<int>(i);
      if (snapshots_[i].year() != expected)
        throw InvalidArgument("snapshot in slot " + std::to_string(expected) + " has year " +
                              std::to_string(snapshots_[i].year()));
      for (NodeId id : snapshots_[i].nodes())
        if (id.value >= registry_.size())
          throw InvalidArgument("snapshot " + std::to_string(expected) + " references unregistered node " +
                                std::to_string(id.value));
    }
  }

  const NodeRegistry& registry() const { return registry_; }
  int start_year() const { return start_year_; }
  int end_year() const { return start_year_ + static_cast<int>(snapshots_.size()) - 1; }
  bool covers(int year) const { return year >= start_year() && year <= end_year(); }
  const std::vector<SignedGraph>& snapshots() const { return snapshots_; }

  const SignedGraph& at(int year) const {
    if (!covers(year))
      throw YearOutOfRange("year " + std::to_string(year) + " outside " + std::to_string(start_year()) + "-" +
                           std::to_string(end_year()));
    return snapshots_[static_cast<std::size_t>(year - start_year_)];
  }

  friend bool operator==(const TemporalNetwork&, const TemporalNetwork&) = default;

 private:
  NodeRegistry registry_;
  int start_year_;
  std::vector<SignedGraph> snapshots_;
};

}  // namespace balance

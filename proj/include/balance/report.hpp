#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "balance/signed_graph.hpp"
#include "balance/stats.hpp"
#include "balance/surrogates.hpp"
#include "balance/transitions.hpp"
#include "balance/triad_census.hpp"

namespace balance {

/// Last years of the first and second historical periods (chart markers).
inline constexpr int kFirstPeriodEnd = 1866;
inline constexpr int kSecondPeriodEnd = 1941;

/// Six significant digits; missing or non-finite values are empty cells.
inline std::string format_number(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return {};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", *v == 0.0 ? 0.0 : *v);
  return buf;
}

struct SummaryRow {
  int year = 0;
  std::size_t n_nodes = 0;
  std::optional<double> avg_degree;
  std::optional<double> frac_positive;
  std::optional<double> frac_balanced;
};

inline std::vector<SummaryRow> summarize(const TemporalNetwork& net, Denominator den = Denominator::Closed) {
  std::vector<SummaryRow> rows;
  for (const auto& g : net.snapshots()) {
    SummaryRow r{g.year(), g.node_count(), {}, {}, {}};
    if (g.node_count() > 0) r.avg_degree = average_degree(g);
    if (g.edge_count() > 0) r.frac_positive = fraction_positive_edges(g);
    if (const auto c = census(g); c.closed() > 0) r.frac_balanced = fraction_balanced(c, den);
    rows.push_back(r);
  }
  return rows;
}

inline std::string to_csv(std::span<const SummaryRow> rows) {
  std::ostringstream out;
  out << "year,n_nodes,avg_degree,frac_positive,frac_balanced\n";
  for (const auto& r : rows)
    out << r.year << ',' << r.n_nodes << ',' << format_number(r.avg_degree) << ',' << format_number(r.frac_positive)
        << ',' << format_number(r.frac_balanced) << '\n';
  return out.str();
}

struct StaticZRow {
  int year = 0;
  std::optional<double> empirical;          // nullopt when the year has no closed triads
  std::optional<SurrogateSummary> summary;  // nullopt when no surrogates were drawn
};

/// Fraction of balanced triads against the sign-shuffle null, one row per year.
inline std::vector<StaticZRow> static_z(const TemporalNetwork& net, const SurrogateConfig& cfg,
                                        Denominator den = Denominator::Closed, StdKind kind = StdKind::Population) {
  std::vector<StaticZRow> rows;
  for (const auto& g : net.snapshots()) {
    StaticZRow r{g.year(), {}, {}};
    if (const auto c = census(g); c.closed() > 0) {
      r.empirical = fraction_balanced(c, den);
      const auto samples = sample_static(g, cfg, den);
      r.summary = zscore(*r.empirical, samples, kind);
    }
    rows.push_back(r);
  }
  return rows;
}

inline std::string to_csv(std::span<const StaticZRow> rows) {
  std::ostringstream out;
  out << "year,empirical,mean,std,z,degenerate\n";
  for (const auto& r : rows) {
    out << r.year << ',' << format_number(r.empirical) << ',';
    if (r.summary)
      out << format_number(r.summary->mean) << ',' << format_number(r.summary->std) << ','
          << format_number(r.summary->z) << ',' << (r.summary->degenerate ? 1 : 0);
    else
      out << ",,,1";
    out << '\n';
  }
  return out.str();
}

enum class GrowthFlag { None, NoTransitions, Undefined, Degenerate };

inline const char* to_string(GrowthFlag f) {
  switch (f) {
    case GrowthFlag::None: return "";
    case GrowthFlag::NoTransitions: return "no_transitions";
    case GrowthFlag::Undefined: return "undefined";
    case GrowthFlag::Degenerate: return "degenerate";
  }
  return "";
}

struct GrowthZRow {
  int year = 0;  // year t of the (t-1, t) pair
  std::string stat_name;
  std::optional<double> empirical;
  std::optional<SurrogateSummary> summary;
  GrowthFlag flag = GrowthFlag::None;
};

inline constexpr std::optional<double> BalanceDynamicsStats::*kGrowthStats[] = {
    &BalanceDynamicsStats::escape_from_imbalance,
    &BalanceDynamicsStats::closure_bias,
    &BalanceDynamicsStats::balanced_persistence,
};

inline constexpr const char* kGrowthStatNames[] = {"escape_from_imbalance", "closure_bias", "balanced_persistence"};

/// The three balance-dynamics statistics against the growth null, three rows per consecutive year pair.
inline std::vector<GrowthZRow> growth_z(const TemporalNetwork& net, const SurrogateConfig& cfg,
                                        StdKind kind = StdKind::Population) {
  std::vector<GrowthZRow> rows;
  for (int year = net.start_year() + 1; year <= net.end_year(); ++year) {
    const auto [prev, curr] = common_subgraphs(net.at(year - 1), net.at(year));
    const GrowthNull null(prev, curr);
    const auto empirical = balance_dynamics_stats(prev, curr);
    std::vector<BalanceDynamicsStats> samples;
    if (null.has_transitions()) samples = sample_growth(null, cfg);
    for (std::size_t s = 0; s < 3; ++s) {
      GrowthZRow r{year, kGrowthStatNames[s], empirical.*kGrowthStats[s], {}, GrowthFlag::None};
      if (!null.has_transitions()) {
        r.flag = GrowthFlag::NoTransitions;
      } else {
        std::vector<std::optional<double>> values;
        values.reserve(samples.size());
        for (const auto& x : samples) values.push_back(x.*kGrowthStats[s]);
        r.summary = zscore(r.empirical.value_or(0.0), values, kind);
        if (!r.empirical) {
          r.summary->z.reset();
          r.flag = GrowthFlag::Undefined;
        } else if (r.summary->degenerate) {
          r.flag = GrowthFlag::Degenerate;
        }
      }
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

inline std::string to_csv(std::span<const GrowthZRow> rows) {
  std::ostringstream out;
  out << "year,stat_name,empirical,mean,std,z,flag\n";
  for (const auto& r : rows) {
    out << r.year << ',' << r.stat_name << ',' << format_number(r.empirical) << ',';
    if (r.summary)
      out << format_number(r.summary->mean) << ',' << format_number(r.summary->std) << ','
          << format_number(r.summary->z);
    else
      out << ",,";
    out << ',' << to_string(r.flag) << '\n';
  }
  return out.str();
}

/// Graphviz description of one year: positive edges solid, negative dashed.
inline void write_dot(const TemporalNetwork& net, int year, std::ostream& out) {
  const auto& g = net.at(year);
  const auto& reg = net.registry();
  auto quoted = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') q += '\\';
      q += c;
    }
    return q + '"';
  };
  out << "graph \"" << year << "\" {\n";
  for (NodeId n : g.nodes()) out << "  " << quoted(reg.label(n)) << ";\n";
  for (const auto& [d, sign] : g.sorted_edges()) {
    out << "  " << quoted(reg.label(d.a())) << " -- " << quoted(reg.label(d.b()));
    if (sign == EdgeState::Positive)
      out << " [style=solid, color=blue];\n";
    else
      out << " [style=dashed, color=red];\n";
  }
  out << "}\n";
}

}  // namespace balance

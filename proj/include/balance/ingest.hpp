#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "balance/csv.hpp"
#include "balance/errors.hpp"
#include "balance/signed_graph.hpp"

namespace balance {

using Date = std::chrono::year_month_day;

inline Date make_date(int y, unsigned m, unsigned d) {
  return Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
}

struct RowError {
  std::string file;
  std::size_t line = 0;
  std::string message;

  std::string to_string() const { return file + ":" + std::to_string(line) + ": " + message; }
};

/// Raised when a file has more bad rows than ParseOptions::max_errors.
struct ParseError : Error {
  explicit ParseError(std::vector<RowError> errs) : Error(summarize(errs)), errors(std::move(errs)) {}

  std::vector<RowError> errors;

 private:
  static std::string summarize(const std::vector<RowError>& errs) {
    std::string out = std::to_string(errs.size()) + " malformed rows";
    for (const auto& e : errs) out += "\n  " + e.to_string();
    return out;
  }
};

/// Raised by the network builder when records reference states absent from the membership list.
struct UnresolvedStateError : Error {
  explicit UnresolvedStateError(std::vector<std::string> refs) : Error(summarize(refs)), references(std::move(refs)) {}

  std::vector<std::string> references;

 private:
  static std::string summarize(const std::vector<std::string>& refs) {
    std::string out = "unresolved state references:";
    for (const auto& r : refs) out += " " + r;
    return out;
  }
};

struct ParseOptions {
  std::size_t max_errors = 20;
  int open_end_year = 2016;  // open-ended intervals are truncated at the end of this year
};

template <typename T>
struct ParseResult {
  std::vector<T> records;
  std::vector<RowError> errors;
};

struct MembershipInterval {
  std::string state_label;
  int state_number = 0;
  Date start_date;
  Date end_date;

  friend auto operator<=>(const MembershipInterval&, const MembershipInterval&) = default;
};

enum class Obligation : std::uint8_t {
  Offense = 1 << 0,
  Defense = 1 << 1,
  Neutrality = 1 << 2,
  Nonaggression = 1 << 3,
  Consultation = 1 << 4,
};

class ObligationSet {
 public:
  ObligationSet() = default;
  ObligationSet(std::initializer_list<Obligation> items) {
    for (auto o : items) insert(o);
  }

  void insert(Obligation o) { bits_ |= static_cast<std::uint8_t>(o); }
  bool contains(Obligation o) const { return bits_ & static_cast<std::uint8_t>(o); }
  bool empty() const { return bits_ == 0; }

  friend auto operator<=>(const ObligationSet&, const ObligationSet&) = default;

 private:
  std::uint8_t bits_ = 0;
};

/// Dyadic alliance phase. state_a < state_b (state numbers).
struct AllianceRecord {
  int state_a = 0;
  int state_b = 0;
  Date start_date;
  Date end_date;
  ObligationSet obligations;

  /// Only offense or defense obligations make a positive edge.
  bool creates_edge() const {
    return obligations.contains(Obligation::Offense) || obligations.contains(Obligation::Defense);
  }
  bool inert() const { return !creates_edge(); }

  friend auto operator<=>(const AllianceRecord&, const AllianceRecord&) = default;
};

/// Rivalry between two labelled states, state_a < state_b lexicographically.
struct RivalryInterval {
  std::string state_a;
  std::string state_b;
  int start_year = 0;
  int end_year = 0;

  friend auto operator<=>(const RivalryInterval&, const RivalryInterval&) = default;
};

namespace detail {

template <typename T, typename ParseRow>
ParseResult<T> parse_rows(const csv::Table& table, const ParseOptions& opts, ParseRow&& parse_row) {
  ParseResult<T> out;
  for (const auto& row : table.rows()) {
    try {
      if (row.fields.size() != table.width())
        throw csv::RowFailure("expected " + std::to_string(table.width()) + " fields, found " +
                              std::to_string(row.fields.size()));
      out.records.push_back(parse_row(row));
    } catch (const csv::RowFailure& e) {
      out.errors.push_back({table.path(), row.line, e.what()});
      if (out.errors.size() > opts.max_errors) throw ParseError(std::move(out.errors));
    }
  }
  std::sort(out.records.begin(), out.records.end());
  out.records.erase(std::unique(out.records.begin(), out.records.end()), out.records.end());
  return out;
}

inline Date checked_date(long y, long m, long d, const char* what) {
  const Date date = make_date(static_cast<int>(y), static_cast<unsigned>(m), static_cast<unsigned>(d));
  if (!date.ok())
    throw csv::RowFailure(std::string("invalid ") + what + " date " + std::to_string(y) + "-" + std::to_string(m) +
                          "-" + std::to_string(d));
  return date;
}

/// Month/day columns are optional; blank or zero means start (or end) of the year.
inline Date date_from_columns(const csv::Table& t, const csv::Row& row, long year, const char* month_col,
                              const char* day_col, bool start, const char* what) {
  long month = start ? 1 : 12;
  if (auto c = t.find(month_col))
    if (auto m = csv::optional_int(row, *c, month_col); m && *m > 0) month = *m;
  long day = 0;
  if (auto c = t.find(day_col))
    if (auto d = csv::optional_int(row, *c, day_col); d && *d > 0) day = *d;
  if (day == 0) {
    if (start) {
      day = 1;
    } else {
      const auto last = Date{std::chrono::year{static_cast<int>(year)} / std::chrono::month{static_cast<unsigned>(month)} /
                             std::chrono::last};
      day = last.ok() ? static_cast<unsigned>(last.day()) : 31;
    }
  }
  return checked_date(year, month, day, what);
}

}  // namespace detail

/// State-system membership list (columns matched by name).
inline ParseResult<MembershipInterval> parse_states(const std::filesystem::path& path, const ParseOptions& opts = {}) {
  const auto t = csv::Table::read(path);
  const auto abb = t.require("stateabb"), code = t.require("ccode"), sty = t.require("styear"),
             endy = t.require("endyear");
  t.require("stmonth"), t.require("stday"), t.require("endmonth"), t.require("endday");
  return detail::parse_rows<MembershipInterval>(t, opts, [&](const csv::Row& row) {
    MembershipInterval m;
    m.state_label = csv::Table::trim(csv::field(row, abb, "stateabb"));
    if (m.state_label.empty()) throw csv::RowFailure("missing value for 'stateabb'");
    m.state_number = static_cast<int>(csv::required_int(row, code, "ccode"));
    const long start_year = csv::required_int(row, sty, "styear");
    m.start_date = detail::date_from_columns(t, row, start_year, "stmonth", "stday", true, "start");
    if (auto end_year = csv::optional_int(row, endy, "endyear"))
      m.end_date = detail::date_from_columns(t, row, *end_year, "endmonth", "endday", false, "end");
    else
      m.end_date = make_date(opts.open_end_year, 12, 31);
    if (m.start_date > m.end_date) throw csv::RowFailure("membership ends before it starts");
    return m;
  });
}

/// Dyadic alliance file with 0/1 obligation flags. A missing or zero exit year means still in force.
inline ParseResult<AllianceRecord> parse_alliances(const std::filesystem::path& path, const ParseOptions& opts = {}) {
  const auto t = csv::Table::read(path);
  const auto mem1 = t.require("mem1"), mem2 = t.require("mem2"), yrent = t.require("yrent"),
             yrexit = t.require("yrexit");
  const std::pair<const char*, Obligation> flags[] = {{"offense", Obligation::Offense},
                                                      {"defense", Obligation::Defense},
                                                      {"neutral", Obligation::Neutrality},
                                                      {"nonagg", Obligation::Nonaggression},
                                                      {"consul", Obligation::Consultation}};
  std::vector<std::pair<std::size_t, std::pair<const char*, Obligation>>> flag_columns;
  for (const auto& f : flags) flag_columns.emplace_back(t.require(f.first), f);

  return detail::parse_rows<AllianceRecord>(t, opts, [&](const csv::Row& row) {
    AllianceRecord r;
    const long a = csv::required_int(row, mem1, "mem1");
    const long b = csv::required_int(row, mem2, "mem2");
    if (a == b) throw csv::RowFailure("alliance dyad has identical members " + std::to_string(a));
    r.state_a = static_cast<int>(std::min(a, b));
    r.state_b = static_cast<int>(std::max(a, b));
    const long start_year = csv::required_int(row, yrent, "yrent");
    r.start_date = detail::date_from_columns(t, row, start_year, "moent", "dayent", true, "entry");
    const auto exit_year = csv::optional_int(row, yrexit, "yrexit");
    if (exit_year && *exit_year != 0)
      r.end_date = detail::date_from_columns(t, row, *exit_year, "moexit", "dayexit", false, "exit");
    else
      r.end_date = make_date(opts.open_end_year, 12, 31);
    if (r.start_date > r.end_date) throw csv::RowFailure("alliance exits before it enters");
    for (const auto& [column, flag] : flag_columns) {
      const long v = csv::optional_int(row, column, flag.first).value_or(0);
      if (v < 0) throw csv::RowFailure(std::string("negative flag '") + flag.first + "'");
      if (v != 0) r.obligations.insert(flag.second);
    }
    return r;
  });
}

/// Rivalry intervals: state_a,state_b,start_year,end_year with state labels.
inline ParseResult<RivalryInterval> parse_rivalries(const std::filesystem::path& path, const ParseOptions& opts = {}) {
  const auto t = csv::Table::read(path);
  const auto ca = t.require("state_a"), cb = t.require("state_b"), cs = t.require("start_year"),
             ce = t.require("end_year");
  return detail::parse_rows<RivalryInterval>(t, opts, [&](const csv::Row& row) {
    RivalryInterval r;
    auto a = csv::Table::trim(csv::field(row, ca, "state_a"));
    auto b = csv::Table::trim(csv::field(row, cb, "state_b"));
    if (a.empty() || b.empty()) throw csv::RowFailure("missing state label");
    if (a == b) throw csv::RowFailure("rivalry dyad has identical members " + a);
    if (b < a) std::swap(a, b);
    r.state_a = std::move(a);
    r.state_b = std::move(b);
    r.start_year = static_cast<int>(csv::required_int(row, cs, "start_year"));
    r.end_year = static_cast<int>(csv::required_int(row, ce, "end_year"));
    if (r.start_year > r.end_year)
      throw csv::RowFailure("start_year " + std::to_string(r.start_year) + " after end_year " +
                            std::to_string(r.end_year));
    return r;
  });
}

/// How an interval counts as present in a calendar year.
enum class YearRule {
  AnyOverlap,    // overlaps the year by at least one day
  JanuaryFirst,  // contains January 1 of the year
};

inline bool active_in(const Date& start, const Date& end, int year, YearRule rule) {
  const Date jan1 = make_date(year, 1, 1);
  if (rule == YearRule::JanuaryFirst) return start <= jan1 && jan1 <= end;
  return start <= make_date(year, 12, 31) && end >= jan1;
}

struct BuildOptions {
  YearRule rule = YearRule::AnyOverlap;
};

struct BuildResult {
  TemporalNetwork network;
  std::vector<std::string> warnings;
};

/// Yearly snapshots: members are states present in the year; a dyad is negative if any rivalry is
/// active, otherwise positive if any offense/defense alliance is active, otherwise absent.
inline BuildResult build_yearly_networks(const std::vector<MembershipInterval>& states,
                                         const std::vector<AllianceRecord>& alliances,
                                         const std::vector<RivalryInterval>& rivalries, int start_year, int end_year,
                                         const BuildOptions& opts = {}) {
  if (start_year > end_year)
    throw InvalidArgument("empty year range " + std::to_string(start_year) + ":" + std::to_string(end_year));

  std::map<int, std::string> label_of;
  std::map<std::string, int> number_of;
  for (const auto& s : states) {
    auto [it, inserted] = label_of.emplace(s.state_number, s.state_label);
    if (!inserted && it->second != s.state_label)
      throw InvalidArgument("state number " + std::to_string(s.state_number) + " has labels " + it->second + " and " +
                            s.state_label);
    auto [jt, fresh] = number_of.emplace(s.state_label, s.state_number);
    if (!fresh && jt->second != s.state_number)
      throw InvalidArgument("state label " + s.state_label + " used by numbers " + std::to_string(jt->second) +
                            " and " + std::to_string(s.state_number));
  }

  std::set<std::string> unresolved;
  for (const auto& a : alliances)
    for (int code : {a.state_a, a.state_b})
      if (!label_of.contains(code)) unresolved.insert(std::to_string(code));
  for (const auto& r : rivalries)
    for (const auto* label : {&r.state_a, &r.state_b})
      if (!number_of.contains(*label)) unresolved.insert(*label);
  if (!unresolved.empty()) throw UnresolvedStateError({unresolved.begin(), unresolved.end()});

  std::vector<std::string> labels;
  for (const auto& [label, number] : number_of) labels.push_back(label);
  auto registry = NodeRegistry::from_labels(labels);
  auto id_of_label = [&](const std::string& l) { return *registry.find(l); };
  auto id_of_number = [&](int n) { return id_of_label(label_of.at(n)); };

  std::vector<std::string> warnings;
  std::vector<SignedGraph> snapshots;
  for (int year = start_year; year <= end_year; ++year) {
    std::set<NodeId> members;
    for (const auto& s : states)
      if (active_in(s.start_date, s.end_date, year, opts.rule)) members.insert(id_of_label(s.state_label));
    if (members.empty()) warnings.push_back("year " + std::to_string(year) + " has no member states");

    std::map<Dyad, EdgeState> dyads;
    for (const auto& r : rivalries) {
      if (!active_in(make_date(r.start_year, 1, 1), make_date(r.end_year, 12, 31), year, opts.rule)) continue;
      const Dyad d(id_of_label(r.state_a), id_of_label(r.state_b));
      if (members.contains(d.a()) && members.contains(d.b())) dyads[d] = EdgeState::Negative;
    }
    for (const auto& a : alliances) {
      if (!a.creates_edge() || !active_in(a.start_date, a.end_date, year, opts.rule)) continue;
      const Dyad d(id_of_number(a.state_a), id_of_number(a.state_b));
      if (members.contains(d.a()) && members.contains(d.b())) dyads.emplace(d, EdgeState::Positive);
    }
    std::vector<std::pair<Dyad, EdgeState>> edges(dyads.begin(), dyads.end());
    snapshots.emplace_back(year, std::vector<NodeId>(members.begin(), members.end()), edges);
  }
  return {TemporalNetwork(std::move(registry), start_year, std::move(snapshots)), std::move(warnings)};
}

struct YearRange {
  int first = 0;
  int last = 0;
};

struct EdgeListResult {
  TemporalNetwork network;
  std::vector<RowError> errors;
};

/// Loads the normalized edge list, optionally with the companion `year,node` membership file that
/// carries isolated nodes. Without a membership file, a year's nodes are its edge endpoints.
inline EdgeListResult load_edgelist(const std::filesystem::path& edges_path,
                                    const std::optional<std::filesystem::path>& members_path = std::nullopt,
                                    std::optional<YearRange> years = std::nullopt, const ParseOptions& opts = {}) {
  std::vector<RowError> errors;
  auto record = [&](const csv::Table& t, const csv::Row& row, const std::string& msg) {
    errors.push_back({t.path(), row.line, msg});
    if (errors.size() > opts.max_errors) throw ParseError(std::move(errors));
  };

  std::map<int, std::set<std::string>> members;
  std::optional<YearRange> coverage;
  auto widen = [&](int y) {
    if (!coverage) coverage = YearRange{y, y};
    coverage->first = std::min(coverage->first, y);
    coverage->last = std::max(coverage->last, y);
  };

  if (members_path) {
    const auto t = csv::Table::read(*members_path);
    const auto cy = t.require("year"), cn = t.require("node");
    for (const auto& row : t.rows()) {
      try {
        const int year = static_cast<int>(csv::required_int(row, cy, "year"));
        auto node = csv::Table::trim(csv::field(row, cn, "node"));
        if (node.empty()) throw csv::RowFailure("missing value for 'node'");
        widen(year);
        members[year].insert(std::move(node));
      } catch (const csv::RowFailure& e) {
        record(t, row, e.what());
      }
    }
  }

  const auto t = csv::Table::read(edges_path);
  const auto cy = t.require("year"), ca = t.require("node_a"), cb = t.require("node_b"), cs = t.require("sign");
  struct RawEdge {
    int year;
    std::string a, b;
    EdgeState sign;
  };
  std::vector<RawEdge> raw;
  std::set<std::tuple<int, std::string, std::string>> seen;
  for (const auto& row : t.rows()) {
    try {
      if (row.fields.size() != t.width())
        throw csv::RowFailure("expected " + std::to_string(t.width()) + " fields, found " +
                              std::to_string(row.fields.size()));
      const int year = static_cast<int>(csv::required_int(row, cy, "year"));
      auto a = csv::Table::trim(csv::field(row, ca, "node_a"));
      auto b = csv::Table::trim(csv::field(row, cb, "node_b"));
      const auto sign_text = csv::Table::trim(csv::field(row, cs, "sign"));
      if (a.empty() || b.empty()) throw csv::RowFailure("missing node label");
      if (a == b) throw csv::RowFailure("self-loop on " + a);
      EdgeState sign;
      if (sign_text == "+") sign = EdgeState::Positive;
      else if (sign_text == "-") sign = EdgeState::Negative;
      else throw csv::RowFailure("sign must be '+' or '-', found '" + sign_text + "'");
      if (years && (year < years->first || year > years->last)) continue;
      if (members_path) {
        const auto it = members.find(year);
        for (const auto* label : {&a, &b})
          if (it == members.end() || !it->second.contains(*label))
            throw csv::RowFailure("node " + *label + " is not a member in " + std::to_string(year));
      } else {
        widen(year);
      }
      if (b < a) std::swap(a, b);
      if (!seen.emplace(year, a, b).second)
        throw csv::RowFailure("duplicate dyad " + a + "," + b + " in year " + std::to_string(year));
      raw.push_back({year, std::move(a), std::move(b), sign});
    } catch (const csv::RowFailure& e) {
      record(t, row, e.what());
    }
  }

  if (years) {
    if (years->first > years->last)
      throw InvalidArgument("empty year range " + std::to_string(years->first) + ":" + std::to_string(years->last));
    if (members_path && (!coverage || years->first < coverage->first || years->last > coverage->last))
      throw YearOutOfRange("requested years " + std::to_string(years->first) + ":" + std::to_string(years->last) +
                           " outside membership coverage");
    coverage = years;
  }
  if (!coverage) throw InvalidArgument(edges_path.string() + ": no years declared and no edges to infer them from");

  std::set<std::string> labels;
  for (const auto& [year, nodes] : members)
    if (year >= coverage->first && year <= coverage->last) labels.insert(nodes.begin(), nodes.end());
  for (const auto& e : raw) labels.insert(e.a), labels.insert(e.b);
  auto registry = NodeRegistry::from_labels({labels.begin(), labels.end()});

  std::map<int, std::map<Dyad, EdgeState>> by_year;
  std::map<int, std::set<NodeId>> nodes_by_year;
  for (const auto& e : raw) {
    const Dyad d(*registry.find(e.a), *registry.find(e.b));
    by_year[e.year].emplace(d, e.sign);
    nodes_by_year[e.year].insert(d.a());
    nodes_by_year[e.year].insert(d.b());
  }
  for (const auto& [year, nodes] : members)
    for (const auto& n : nodes)
      if (auto id = registry.find(n)) nodes_by_year[year].insert(*id);

  std::vector<SignedGraph> snapshots;
  for (int year = coverage->first; year <= coverage->last; ++year) {
    const auto& nodes = nodes_by_year[year];
    const auto& dyads = by_year[year];
    std::vector<std::pair<Dyad, EdgeState>> edges(dyads.begin(), dyads.end());
    snapshots.emplace_back(year, std::vector<NodeId>(nodes.begin(), nodes.end()), edges);
  }
  return {TemporalNetwork(std::move(registry), coverage->first, std::move(snapshots)), std::move(errors)};
}

/// Writes the normalized edge list and membership files, rows sorted by year then label.
inline void write_edgelist(const TemporalNetwork& net, const std::filesystem::path& edges_path,
                           const std::filesystem::path& members_path) {
  std::ofstream edges(edges_path, std::ios::binary), members(members_path, std::ios::binary);
  if (!edges) throw IoError("cannot write " + edges_path.string());
  if (!members) throw IoError("cannot write " + members_path.string());
  const auto& reg = net.registry();
  auto by_label = [&reg](NodeId l, NodeId r) { return reg.label(l) < reg.label(r); };
  edges << "year,node_a,node_b,sign\n";
  members << "year,node\n";
  for (const auto& g : net.snapshots()) {
    auto nodes = g.nodes();
    std::sort(nodes.begin(), nodes.end(), by_label);
    for (NodeId n : nodes) members << g.year() << ',' << csv::quote(reg.label(n)) << '\n';
    std::vector<std::tuple<std::string, std::string, EdgeState>> rows;
    for (const auto& [d, sign] : g.edges()) {
      auto a = reg.label(d.a()), b = reg.label(d.b());
      if (b < a) std::swap(a, b);
      rows.emplace_back(std::move(a), std::move(b), sign);
    }
    std::sort(rows.begin(), rows.end());
    for (const auto& [a, b, sign] : rows)
      edges << g.year() << ',' << csv::quote(a) << ',' << csv::quote(b) << ',' << to_string(sign) << '\n';
  }
  if (!edges || !members) throw IoError("write failed for " + edges_path.string());
}

}  // namespace balance

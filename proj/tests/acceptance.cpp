// Acceptance suite: one PASS/FAIL line per criterion. Exit status is non-zero if any criterion fails.
//
// Set BALANCE_REAL_DATA to a directory holding states.csv, alliances.csv and rivalries.csv to run the
// historical-pattern check; otherwise it is reported as SKIP.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "balance/balance.hpp"
#include "test_support.hpp"

using namespace balance;
using namespace balance::testing;

namespace {

enum class Outcome { Pass, Fail, Skip };

struct Verdict {
  Outcome outcome;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

Verdict census_oracle() {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<std::uint32_t> size(3, 50);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto start = Clock::now();
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = random_signed_graph(rng, size(rng), unit(rng), unit(rng));
    const auto got = census(g);
    const auto want = oracle_census(g);
    if (got.n_balanced != want.balanced || got.n_imbalanced != want.imbalanced || got.n_open != want.open ||
        got.n_triples != choose3(g.node_count()))
      ++mismatches;
  }
  const double t = seconds_since(start);
  return {mismatches == 0 && t < 10 ? Outcome::Pass : Outcome::Fail,
          std::to_string(mismatches) + "/200 mismatches, " + fixed(t) + " s (limit 10 s)"};
}

Verdict transition_oracle() {
  std::mt19937_64 rng(102);
  std::uniform_int_distribution<std::uint32_t> size(0, 20);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto start = Clock::now();
  int mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto prev = random_signed_graph(rng, size(rng), unit(rng), unit(rng));
    const auto curr = perturb(rng, prev, unit(rng), unit(rng), unit(rng));
    if (edge_transition_counts(prev, curr).c != oracle_edge_transitions(prev, curr) ||
        triad_transition_counts(prev, curr).c != oracle_triad_transitions(prev, curr))
      ++mismatches;
  }
  const double t = seconds_since(start);
  return {mismatches == 0 && t < 10 ? Outcome::Pass : Outcome::Fail,
          std::to_string(mismatches) + "/100 mismatches, " + fixed(t) + " s (limit 10 s)"};
}

Verdict null_conservation() {
  std::mt19937_64 rng(103);
  const auto g = random_signed_graph(rng, 50, 0.2, 0.6);
  std::set<Dyad> topology;
  for (const auto& [d, s] : g.edges()) topology.insert(d);
  const auto counts = edge_counts(g);
  int sign_failures = 0;
  for (std::size_t k = 0; k < 1000; ++k) {
    const auto s = shuffle_signs(g, derive_seed(7, g.year(), k));
    std::set<Dyad> shuffled;
    for (const auto& [d, sign] : s.edges()) shuffled.insert(d);
    if (shuffled != topology || edge_counts(s) != counts || s.nodes() != g.nodes()) ++sign_failures;
  }

  const auto prev = random_signed_graph(rng, 50, 0.2, 0.6, 1900);
  const auto curr = perturb(rng, prev, 0.1, 0.2, 0.5);
  const auto empirical = edge_transition_counts(prev, curr);
  int growth_failures = 0;
  for (std::size_t k = 0; k < 1000; ++k) {
    const auto s = shuffle_growth(prev, curr, derive_seed(7, curr.year(), k));
    if (edge_transition_counts(prev, s).c != empirical.c) ++growth_failures;
  }
  return {sign_failures == 0 && growth_failures == 0 ? Outcome::Pass : Outcome::Fail,
          "sign shuffle " + std::to_string(sign_failures) + "/1000 violations (" + std::to_string(counts.positive) +
              "+, " + std::to_string(counts.negative) + "-); growth " + std::to_string(growth_failures) +
              "/1000 violations (" + std::to_string(empirical.off_diagonal()) + " transitions)"};
}

Verdict exhaustive_null() {
  // K4 with four positive and two negative edges: C(6,2) = 15 placements.
  const std::vector<Dyad> dyads{Dyad(N(0), N(1)), Dyad(N(0), N(2)), Dyad(N(0), N(3)),
                                Dyad(N(1), N(2)), Dyad(N(1), N(3)), Dyad(N(2), N(3))};
  std::vector<std::vector<EdgeState>> placements;
  enumerate_arrangements(std::vector<EdgeState>{M, M}, 6, P, placements);
  std::map<int, double> expected;
  for (const auto& p : placements) {
    std::vector<std::pair<Dyad, EdgeState>> edges;
    for (std::size_t i = 0; i < 6; ++i) edges.emplace_back(dyads[i], p[i]);
    expected[static_cast<int>(oracle_census(SignedGraph(2000, node_range(4), edges)).balanced)] +=
        1.0 / static_cast<double>(placements.size());
  }
  std::vector<std::pair<Dyad, EdgeState>> edges;
  for (std::size_t i = 0; i < 6; ++i) edges.emplace_back(dyads[i], i < 2 ? M : P);
  const SignedGraph k4(2000, node_range(4), edges);
  const auto samples = sample_static(k4, SurrogateConfig{100'000, 104, 0});
  std::map<int, std::uint64_t> observed;
  for (double x : samples) ++observed[static_cast<int>(std::lround(x * 4))];
  const double p = chi_square_p_value(observed, expected);
  return {placements.size() == 15 && p > 0.001 ? Outcome::Pass : Outcome::Fail,
          std::to_string(placements.size()) + " placements, " + std::to_string(expected.size()) +
              " outcomes, chi-square p = " + fixed(p, 4) + " (need > 0.001)"};
}

Verdict normalization() {
  std::mt19937_64 rng(105);
  std::uniform_int_distribution<std::uint64_t> count(0, 1'000'000'000);
  double worst = 0.0;
  std::size_t rows = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    TriadTransitionCounts c;
    for (auto& row : c.c)
      for (auto& v : row) v = trial % 5 == 0 ? count(rng) % 3 : count(rng);
    const auto w = triad_transition_probabilities(c);
    for (std::size_t i = 0; i < 3; ++i) {
      if (!w.defined[i]) continue;
      ++rows;
      worst = std::max(worst, std::abs(w.w[i][0] + w.w[i][1] + w.w[i][2] - 1.0));
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", worst);
  return {worst <= 1e-12 ? Outcome::Pass : Outcome::Fail,
          std::to_string(rows) + " defined rows, max |sum - 1| = " + buf + " (limit 1e-12)"};
}

Verdict z_calibration() {
  std::mt19937_64 rng(106);
  const auto base = random_signed_graph(rng, 30, 0.3, 0.6);
  int within = 0, degenerate = 0;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    const auto empirical_graph = shuffle_signs(base, derive_seed(5000, 0, trial));
    const double empirical = fraction_balanced(empirical_graph);
    const auto summary = zscore(empirical, sample_static(empirical_graph, SurrogateConfig{1000, 9000 + trial, 0}));
    if (!summary.z) {
      ++degenerate;
      continue;
    }
    if (std::abs(*summary.z) < 2.0) ++within;
  }
  const auto k6 = two_faction_complete(6, 3);
  const auto k6_summary = zscore(fraction_balanced(k6), sample_static(k6, SurrogateConfig{1000, 107, 0}));
  const bool k6_ok = k6_summary.z && *k6_summary.z > 2.0;
  return {within >= 95 && k6_ok ? Outcome::Pass : Outcome::Fail,
          std::to_string(within) + "/100 null draws with |z| < 2 (need >= 95, " + std::to_string(degenerate) +
              " degenerate); two-faction K6 z = " + (k6_summary.z ? fixed(*k6_summary.z) : std::string("undefined")) +
              " (need > 2)"};
}

/// 1816-2009 synthetic system: members enter over time and some leave; edges persist with churn.
TemporalNetwork synthetic_history() {
  std::mt19937_64 rng(108);
  const std::uint32_t pool = 200;
  std::vector<int> entry(pool), exit(pool);
  std::uniform_int_distribution<int> span(30, 250);
  for (std::uint32_t i = 0; i < pool; ++i) {
    entry[i] = i < 23 ? 1816 : 1816 + static_cast<int>((i - 23) * 193 / (pool - 23));
    exit[i] = i % 9 == 0 ? std::min(2009, entry[i] + span(rng)) : 2009;
  }
  std::vector<std::string> labels;
  for (std::uint32_t i = 0; i < pool; ++i) labels.push_back("S" + std::to_string(1000 + i));
  std::map<Dyad, EdgeState> edges;
  std::vector<SignedGraph> years;
  std::bernoulli_distribution drop(0.06), flip(0.02), positive(0.8);
  for (int year = 1816; year <= 2009; ++year) {
    std::vector<NodeId> nodes;
    for (std::uint32_t i = 0; i < pool; ++i)
      if (entry[i] <= year && year <= exit[i]) nodes.push_back(N(i));
    const std::set<NodeId> present(nodes.begin(), nodes.end());
    for (auto it = edges.begin(); it != edges.end();) {
      if (!present.contains(it->first.a()) || !present.contains(it->first.b()) || drop(rng)) {
        it = edges.erase(it);
        continue;
      }
      if (flip(rng)) it->second = it->second == P ? M : P;
      ++it;
    }
    std::uniform_int_distribution<std::size_t> pick(0, nodes.size() - 1);
    const std::size_t target = nodes.size() * 4;
    while (edges.size() < target) {
      const auto a = nodes[pick(rng)], b = nodes[pick(rng)];
      if (a == b) continue;
      // Alliances cluster: new positive edges favour nearby ids, giving closed triads.
      const bool close = std::abs(static_cast<long>(a.value) - static_cast<long>(b.value)) < 12;
      if (!close && !drop(rng)) continue;
      edges.emplace(Dyad(a, b), positive(rng) ? P : M);
    }
    years.emplace_back(year, nodes, std::vector<std::pair<Dyad, EdgeState>>(edges.begin(), edges.end()));
  }
  return TemporalNetwork(NodeRegistry::from_labels(labels), 1816, std::move(years));
}

std::string pipeline(const TemporalNetwork& net, unsigned threads) {
  const SurrogateConfig cfg{1000, 2024, threads};
  const auto summary = summarize(net);
  const auto stat = static_z(net, cfg);
  const auto growth = growth_z(net, cfg);
  return to_csv(summary) + to_csv(stat) + to_csv(growth);
}

struct PipelineRuns {
  std::string single, multi;
  double single_seconds = 0, multi_seconds = 0;
  std::size_t max_nodes = 0, max_edges = 0;
};

const PipelineRuns& pipeline_runs() {
  static const PipelineRuns runs = [] {
    PipelineRuns r;
    const auto net = synthetic_history();
    for (const auto& g : net.snapshots()) {
      r.max_nodes = std::max(r.max_nodes, g.node_count());
      r.max_edges = std::max(r.max_edges, g.edge_count());
    }
    auto start = Clock::now();
    r.single = pipeline(net, 1);
    r.single_seconds = seconds_since(start);
    start = Clock::now();
    r.multi = pipeline(net, 4);
    r.multi_seconds = seconds_since(start);
    return r;
  }();
  return runs;
}

Verdict determinism() {
  const auto& r = pipeline_runs();
  return {r.single == r.multi && !r.single.empty() ? Outcome::Pass : Outcome::Fail,
          "1 thread vs 4 threads, " + std::to_string(r.single.size()) + " CSV bytes, " +
              (r.single == r.multi ? "identical" : "different")};
}

Verdict performance() {
  std::mt19937_64 rng(109);
  std::vector<std::pair<Dyad, EdgeState>> edges;
  std::set<Dyad> seen;
  std::uniform_int_distribution<std::uint32_t> node(0, 199);
  std::bernoulli_distribution positive(0.7);
  while (edges.size() < 1500) {
    const auto a = node(rng), b = node(rng);
    if (a == b || !seen.insert(Dyad(N(a), N(b))).second) continue;
    edges.emplace_back(Dyad(N(a), N(b)), positive(rng) ? P : M);
  }
  const TemporalNetwork one(NodeRegistry::from_labels([] {
                              std::vector<std::string> l;
                              for (int i = 0; i < 200; ++i) l.push_back("N" + std::to_string(i));
                              return l;
                            }()),
                            2000, {SignedGraph(2000, node_range(200), edges)});
  const auto start = Clock::now();
  const auto rows = static_z(one, SurrogateConfig{1000, 110, 0});
  const double single_year = seconds_since(start);

  const auto& r = pipeline_runs();
  const bool ok = single_year < 5.0 && r.single_seconds < 600.0 && rows.size() == 1;
  return {ok ? Outcome::Pass : Outcome::Fail,
          "static-z n=200 |E|=1500 x1000: " + fixed(single_year) + " s (limit 5 s); 1816-2009 pipeline (" +
              std::to_string(r.max_nodes) + " nodes, " + std::to_string(r.max_edges) +
              " edges at most, 1000 samples/year): " + fixed(r.single_seconds) + " s (limit 600 s)"};
}

Verdict historical_pattern() {
  const char* dir = std::getenv("BALANCE_REAL_DATA");
  if (!dir) return {Outcome::Skip, "BALANCE_REAL_DATA not set; no historical datasets supplied"};
  const std::filesystem::path root(dir);
  const auto states = parse_states(root / "states.csv");
  const auto alliances = parse_alliances(root / "alliances.csv");
  const auto rivalries = parse_rivalries(root / "rivalries.csv");
  const auto net =
      build_yearly_networks(states.records, alliances.records, rivalries.records, 1816, 2009).network;
  const auto summary = summarize(net);
  const auto z = static_z(net, SurrogateConfig{1000, 1, 0});
  auto share = [&](int from, int to, auto&& test) {
    int hit = 0, total = 0;
    for (int y = from; y <= to; ++y, ++total)
      if (test(static_cast<std::size_t>(y - 1816))) ++hit;
    return static_cast<double>(hit) / total;
  };
  auto balanced_high = [&](std::size_t i) { return summary[i].frac_balanced.value_or(0.0) > 0.5; };
  auto z_high = [&](std::size_t i) {
    return z[i].summary && z[i].summary->z && *z[i].summary->z > 2.0;
  };
  const double b1 = share(1816, 1866, balanced_high), b3 = share(1942, 2009, balanced_high);
  const double z1 = share(1816, 1866, z_high), z3 = share(1942, 2009, z_high);
  const auto f1866 = summary[1866 - 1816].frac_balanced, f1867 = summary[1867 - 1816].frac_balanced;
  const bool drop = f1866 && f1867 && *f1867 < *f1866;
  const bool ok = b1 > 0.5 && b3 > 0.5 && z1 > 0.5 && z3 > 0.5 && drop;
  return {ok ? Outcome::Pass : Outcome::Fail,
          "balanced > 0.5 in " + fixed(100 * b1, 0) + "% / " + fixed(100 * b3, 0) + "% of first/third period years; z > 2 in " +
              fixed(100 * z1, 0) + "% / " + fixed(100 * z3, 0) + "%; 1866 -> 1867 " + format_number(f1866) + " -> " +
              format_number(f1867)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"triad census matches brute-force enumeration", census_oracle},
      {"transition counts match brute-force enumeration", transition_oracle},
      {"null models conserve signs, topology and transitions", null_conservation},
      {"sign-shuffle distribution matches exhaustive enumeration", exhaustive_null},
      {"transition probability rows sum to one", normalization},
      {"z-score calibration", z_calibration},
      {"deterministic across thread counts", determinism},
      {"performance", performance},
      {"historical balance pattern (optional, real data)", historical_pattern},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {Outcome::Fail, std::string("exception: ") + e.what()};
    }
    const char* tag = v.outcome == Outcome::Pass ? "PASS" : v.outcome == Outcome::Fail ? "FAIL" : "SKIP";
    if (v.outcome == Outcome::Fail) ++failures;
    std::printf("%s  %s: %s\n", tag, name, v.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}

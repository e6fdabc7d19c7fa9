// sbalance: yearly signed alliance/rivalry networks and structural-balance z-tests.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "balance/balance.hpp"
#include "balance/svg.hpp"

namespace fs = std::filesystem;
using namespace balance;

namespace {

struct RunConfig {
  std::string years = "1816:2009";
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string out = ".";
  std::string edgelist;
  std::string members;
  std::string states;
  std::string alliances;
  std::string rivalries;
  std::string denominator = "closed";
  std::string std_kind = "population";
  std::string year_rule = "overlap";
  int open_end_year = 2016;
  std::size_t max_errors = 20;
  bool svg = false;
  int year = 0;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

YearRange parse_years(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("--years expects A:B, got '" + text + "'");
  YearRange r;
  try {
    std::size_t used = 0;
    r.first = std::stoi(text.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument(text);
    const auto tail = text.substr(colon + 1);
    r.last = std::stoi(tail, &used);
    if (used != tail.size()) throw std::invalid_argument(text);
  } catch (const std::logic_error&) {
    throw UsageError("--years expects A:B, got '" + text + "'");
  }
  if (r.first > r.last) throw UsageError("empty year range " + text);
  return r;
}

ParseOptions parse_options(const RunConfig& cfg) { return {cfg.max_errors, cfg.open_end_year}; }

void report_row_errors(const std::vector<RowError>& errors) {
  for (const auto& e : errors) std::cerr << "warning: skipped row " << e.to_string() << '\n';
}

bool has_raw_inputs(const RunConfig& cfg) {
  return !cfg.states.empty() || !cfg.alliances.empty() || !cfg.rivalries.empty();
}

TemporalNetwork build_from_raw(const RunConfig& cfg, YearRange years) {
  if (cfg.states.empty() || cfg.alliances.empty() || cfg.rivalries.empty())
    throw UsageError("--states, --alliances and --rivalries must be given together");
  const auto opts = parse_options(cfg);
  auto states = parse_states(cfg.states, opts);
  auto alliances = parse_alliances(cfg.alliances, opts);
  auto rivalries = parse_rivalries(cfg.rivalries, opts);
  report_row_errors(states.errors);
  report_row_errors(alliances.errors);
  report_row_errors(rivalries.errors);
  BuildOptions build;
  if (cfg.year_rule == "jan1") build.rule = YearRule::JanuaryFirst;
  auto built = build_yearly_networks(states.records, alliances.records, rivalries.records, years.first, years.last,
                                     build);
  for (const auto& w : built.warnings) std::cerr << "warning: " << w << '\n';
  return std::move(built.network);
}

TemporalNetwork load_network(const RunConfig& cfg) {
  const auto years = parse_years(cfg.years);
  if (!cfg.edgelist.empty()) {
    if (has_raw_inputs(cfg)) throw UsageError("give either --edgelist or the raw dataset paths, not both");
    std::optional<fs::path> members;
    if (!cfg.members.empty()) members = cfg.members;
    auto loaded = load_edgelist(cfg.edgelist, members, years, parse_options(cfg));
    report_row_errors(loaded.errors);
    return std::move(loaded.network);
  }
  if (has_raw_inputs(cfg)) return build_from_raw(cfg, years);
  throw UsageError("no input: give --edgelist PATH or --states/--alliances/--rivalries");
}

Denominator denominator(const RunConfig& cfg) {
  return cfg.denominator == "all" ? Denominator::AllTriples : Denominator::Closed;
}

StdKind std_kind(const RunConfig& cfg) { return cfg.std_kind == "sample" ? StdKind::Sample : StdKind::Population; }

SurrogateConfig surrogate_config(const RunConfig& cfg) { return {cfg.samples, cfg.seed, cfg.threads}; }

fs::path output_dir(const RunConfig& cfg) {
  fs::path dir(cfg.out);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

void write_chart(const fs::path& path, std::string title, std::vector<svg::Point> points,
                 std::vector<double> hlines = {}, std::vector<int> dots = {}) {
  svg::Chart chart{std::move(title), std::move(points), {kFirstPeriodEnd, kSecondPeriodEnd}, std::move(hlines),
                   std::move(dots)};
  write_text(path, svg::line_chart(chart));
}

int cmd_build(const RunConfig& cfg) {
  if (!has_raw_inputs(cfg)) throw UsageError("build needs --states, --alliances and --rivalries");
  const auto net = build_from_raw(cfg, parse_years(cfg.years));
  const auto dir = output_dir(cfg);
  write_edgelist(net, dir / "edges.csv", dir / "members.csv");
  std::cout << "year,n_nodes,n_positive,n_negative\n";
  for (const auto& g : net.snapshots()) {
    const auto c = edge_counts(g);
    std::cout << g.year() << ',' << g.node_count() << ',' << c.positive << ',' << c.negative << '\n';
  }
  return 0;
}

int cmd_summary(const RunConfig& cfg) {
  const auto net = load_network(cfg);
  const auto rows = summarize(net, denominator(cfg));
  const auto dir = output_dir(cfg);
  write_text(dir / "summary.csv", to_csv(std::span<const SummaryRow>(rows)));
  if (cfg.svg) {
    std::vector<svg::Point> nodes, degree, positive, balanced;
    for (const auto& r : rows) {
      nodes.push_back({r.year, static_cast<double>(r.n_nodes)});
      degree.push_back({r.year, r.avg_degree});
      positive.push_back({r.year, r.frac_positive});
      balanced.push_back({r.year, r.frac_balanced});
    }
    write_chart(dir / "n_nodes.svg", "Number of nodes", nodes);
    write_chart(dir / "avg_degree.svg", "Average degree", degree);
    write_chart(dir / "frac_positive.svg", "Fraction of positive edges", positive);
    write_chart(dir / "frac_balanced.svg", "Fraction of balanced triads", balanced);
  }
  return 0;
}

int cmd_static_z(const RunConfig& cfg) {
  const auto net = load_network(cfg);
  const auto rows = static_z(net, surrogate_config(cfg), denominator(cfg), std_kind(cfg));
  const auto dir = output_dir(cfg);
  write_text(dir / "static_z.csv", to_csv(std::span<const StaticZRow>(rows)));
  if (cfg.svg) {
    std::vector<svg::Point> z;
    for (const auto& r : rows) z.push_back({r.year, r.summary ? r.summary->z : std::nullopt});
    write_chart(dir / "static_z.svg", "z-score, fraction of balanced triads", z, {-2.0, 2.0});
  }
  return 0;
}

int cmd_growth_z(const RunConfig& cfg) {
  const auto net = load_network(cfg);
  const auto rows = growth_z(net, surrogate_config(cfg), std_kind(cfg));
  const auto dir = output_dir(cfg);
  write_text(dir / "growth_z.csv", to_csv(std::span<const GrowthZRow>(rows)));
  if (cfg.svg) {
    for (const char* name : kGrowthStatNames) {
      std::vector<svg::Point> z;
      std::vector<int> dots;
      for (const auto& r : rows) {
        if (r.stat_name != name) continue;
        z.push_back({r.year, r.summary ? r.summary->z : std::nullopt});
        if (r.flag == GrowthFlag::NoTransitions) dots.push_back(r.year);
      }
      write_chart(dir / (std::string("growth_z_") + name + ".svg"), std::string("z-score, ") + name, z, {-2.0, 2.0},
                  dots);
    }
  }
  return 0;
}

int cmd_export_dot(const RunConfig& cfg) {
  const auto net = load_network(cfg);
  if (!net.covers(cfg.year))
    throw YearOutOfRange("year " + std::to_string(cfg.year) + " outside " + std::to_string(net.start_year()) + ":" +
                         std::to_string(net.end_year()));
  const auto dir = output_dir(cfg);
  std::ostringstream dot;
  write_dot(net, cfg.year, dot);
  write_text(dir / ("network_" + std::to_string(cfg.year) + ".dot"), dot.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structural balance of yearly signed alliance/rivalry networks"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a key = value file (command-line flags take precedence)");

  RunConfig cfg;
  app.add_option("--years", cfg.years, "Year range A:B")->capture_default_str();
  app.add_option("--samples", cfg.samples, "Surrogates per year")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
  app.add_option("--threads", cfg.threads, "Worker threads (0 = all cores)")->capture_default_str();
  app.add_option("--out", cfg.out, "Output directory")->capture_default_str();
  app.add_option("--edgelist", cfg.edgelist, "Normalized edge list CSV");
  app.add_option("--members", cfg.members, "Membership CSV (year,node) accompanying --edgelist");
  app.add_option("--states", cfg.states, "State-system membership CSV");
  app.add_option("--alliances", cfg.alliances, "Dyadic alliance CSV");
  app.add_option("--rivalries", cfg.rivalries, "Rivalry CSV");
  app.add_option("--denominator", cfg.denominator, "Balanced fraction denominator")
      ->capture_default_str()
      ->check(CLI::IsMember({"closed", "all"}));
  app.add_option("--std", cfg.std_kind, "Surrogate standard deviation")
      ->capture_default_str()
      ->check(CLI::IsMember({"population", "sample"}));
  app.add_option("--year-rule", cfg.year_rule, "Presence in a year: any overlap or January 1")
      ->capture_default_str()
      ->check(CLI::IsMember({"overlap", "jan1"}));
  app.add_option("--open-end-year", cfg.open_end_year, "Year that truncates open-ended intervals")
      ->capture_default_str();
  app.add_option("--max-row-errors", cfg.max_errors, "Bad rows tolerated per file")->capture_default_str();
  app.add_flag("--svg", cfg.svg, "Also write SVG charts");

  auto* build = app.add_subcommand("build", "Build normalized edge list and membership files from raw datasets");
  auto* summary = app.add_subcommand("summary", "Per-year node count, average degree, positive and balanced fractions");
  auto* static_cmd = app.add_subcommand("static-z", "z-score of balanced fraction against sign-shuffle surrogates");
  auto* growth = app.add_subcommand("growth-z", "z-scores of triad transition statistics against growth surrogates");
  auto* dot = app.add_subcommand("export-dot", "Graphviz file for one year");
  dot->add_option("--year", cfg.year, "Year to export")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    parse_years(cfg.years);
    const auto dir = output_dir(cfg);
    const std::string name = app.get_subcommands().front()->get_name();
    write_text(dir / (name + ".config.ini"), app.config_to_str(true, false));
    if (build->parsed()) return cmd_build(cfg);
    if (summary->parsed()) return cmd_summary(cfg);
    if (static_cmd->parsed()) return cmd_static_z(cfg);
    if (growth->parsed()) return cmd_growth_z(cfg);
    if (dot->parsed()) return cmd_export_dot(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\nRun with --help for usage.\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

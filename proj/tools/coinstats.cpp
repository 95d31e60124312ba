// coinstats: batch front end for the analysis library. Every subcommand
// reads files, writes a deterministic report bundle into --output-dir, and
// finishes with a manifest naming exactly the files it wrote. Errors leave
// one machine-parsable line on stderr and a documented exit code.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coinstats/concentration.hpp"
#include "coinstats/correlation.hpp"
#include "coinstats/fetch.hpp"
#include "coinstats/indicators.hpp"
#include "coinstats/ingestion.hpp"
#include "coinstats/report.hpp"
#include "coinstats/simulate.hpp"
#include "coinstats/timeseries.hpp"

namespace {

using namespace coinstats;

void print_warnings(const std::vector<LoadWarning>& warnings) {
  for (const auto& w : warnings) {
    std::cerr << "warning: line=" << w.line << " coin=" << w.coin
              << " code=" << errc_name(w.code) << " message=\"" << w.message
              << "\"\n";
  }
}

void announce(const std::string& dir, const std::vector<std::string>& files) {
  for (const auto& f : files) {
    std::cout << "wrote " << (std::filesystem::path(dir) / f).string() << "\n";
  }
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : csv) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// --- subcommand bodies ------------------------------------------------------

struct ReturnsArgs {
  std::string prices_file;
  std::string align = "intersection";
  std::string output_dir;
};

int run_returns(const ReturnsArgs& a) {
  AlignPolicy policy = parse_align_policy(a.align);
  auto loaded = load_prices(a.prices_file);
  print_warnings(loaded.warnings);
  std::vector<ReturnSeries> returns;
  returns.reserve(loaded.series.size());
  for (const auto& s : loaded.series) returns.push_back(log_returns(s));
  ReturnPanel panel = align_returns(returns, policy);

  ReportWriter report(a.output_dir, "returns");
  report.add_input(a.prices_file);
  report.add_parameter("align", to_string(policy));
  report.write_file("panel.csv", panel_to_csv(panel));
  announce(a.output_dir, report.finish());
  return 0;
}

struct CorrArgs {
  std::string panel_file;
  std::string anchor;
  int bins = kDefaultCorrelationBins;
  long long min_overlap = kDefaultMinOverlap;
  std::string output_dir;
};

int run_corr(const CorrArgs& a) {
  ReturnPanel panel = load_panel(a.panel_file);
  MatrixResult result;
  if (a.anchor.empty()) {
    result = pearson_matrix(panel, a.min_overlap);
  } else {
    result = partial_matrix(panel, a.anchor, a.min_overlap);
  }

  ReportWriter report(a.output_dir, "corr");
  report.add_input(a.panel_file);
  report.add_parameter("kind", a.anchor.empty() ? "pearson" : "partial");
  if (!a.anchor.empty()) report.add_parameter("partial_anchor", a.anchor);
  report.add_parameter("bins", a.bins);
  report.add_parameter("min_overlap", a.min_overlap);

  report.write_file("matrix.csv", matrix_to_csv(result.matrix));
  report.write_file("support.csv", support_to_csv(result.matrix));
  report.write_file("exclusions.csv", exclusions_to_csv(result.exclusions));

  auto dist = distribution_to_json(
      offdiagonal_distribution(result.matrix, a.bins));
  dist["kind"] = a.anchor.empty() ? "pearson" : "partial";
  if (!a.anchor.empty()) dist["anchor"] = a.anchor;
  report.write_json("distribution.json", dist);

  if (!a.anchor.empty()) {
    auto anchor_dist = distribution_to_json(
        anchor_distribution(panel, a.anchor, a.bins, a.min_overlap));
    anchor_dist["kind"] = "pearson";
    anchor_dist["anchor"] = a.anchor;
    report.write_json("anchor_distribution.json", anchor_dist);
  }
  announce(a.output_dir, report.finish());
  return 0;
}

struct ConcentrationArgs {
  std::string snapshot_file;
  std::string indicators = "market_cap,price,volume_24h";
  std::string output_dir;
};

int run_concentration(const ConcentrationArgs& a) {
  auto loaded = load_snapshot(a.snapshot_file);
  print_warnings(loaded.warnings);
  auto names = split_list(a.indicators);
  auto rows = concentration_report(loaded.snapshots, names);

  ReportWriter report(a.output_dir, "concentration");
  report.add_input(a.snapshot_file);
  report.add_parameter("indicators", names);
  report.write_file("concentration.csv", concentration_to_csv(rows));
  report.write_json("concentration.json", concentration_to_json(rows));
  announce(a.output_dir, report.finish());
  return 0;
}

struct XcorrArgs {
  std::string snapshot_file;
  std::string transform = "raw";
  long long min_overlap = kDefaultMinOverlap;
  std::string output_dir;
};

int run_xcorr(const XcorrArgs& a) {
  Transform transform = parse_transform(a.transform);
  auto loaded = load_snapshot(a.snapshot_file);
  print_warnings(loaded.warnings);
  auto indicators = default_cross_indicators();
  auto table = cross_correlation(loaded.snapshots, indicators, transform,
                                 a.min_overlap);

  ReportWriter report(a.output_dir, "xcorr");
  report.add_input(a.snapshot_file);
  report.add_parameter("transform", to_string(transform));
  report.add_parameter("min_overlap", a.min_overlap);
  report.write_file("xcorr.csv", xcorr_to_csv(table));
  report.write_json("xcorr.json", xcorr_to_json(table));
  announce(a.output_dir, report.finish());
  return 0;
}

struct DistArgs {
  std::string snapshot_file;
  std::string indicator;
  int bins = 30;
  std::string output_dir;
};

int run_dist(const DistArgs& a) {
  auto loaded = load_snapshot(a.snapshot_file);
  print_warnings(loaded.warnings);
  auto hist = log_histogram(loaded.snapshots, a.indicator, a.bins);

  ReportWriter report(a.output_dir, "dist");
  report.add_input(a.snapshot_file);
  report.add_parameter("indicator", a.indicator);
  report.add_parameter("bins", a.bins);
  report.write_file("histogram.csv", log_histogram_to_csv(hist));
  report.write_json("histogram.json", log_histogram_to_json(hist));
  announce(a.output_dir, report.finish());
  return 0;
}

struct SimulateArgs {
  long long coins = 50;
  long long days = 300;
  std::string beta_range = "0.3:1.5";
  double noise = 0.03;
  double anchor_vol = 0.05;
  std::uint64_t seed = 0;
  std::string output_dir;
};

int run_simulate(const SimulateArgs& a) {
  SimulateParams p;
  p.coins = a.coins;
  p.days = a.days;
  auto sep = a.beta_range.find(':');
  if (sep == std::string::npos) sep = a.beta_range.find(',');
  if (sep == std::string::npos) {
    raise(Errc::invalid_parameter,
          "--beta-range expects LO:HI, got '" + a.beta_range + "'");
  }
  p.beta_lo = parse_number_strict(a.beta_range.substr(0, sep), "beta lo");
  p.beta_hi = parse_number_strict(a.beta_range.substr(sep + 1), "beta hi");
  p.noise = a.noise;
  p.anchor_vol = a.anchor_vol;
  p.seed = a.seed;
  auto series = simulate_market(p);

  ReportWriter report(a.output_dir, "simulate");
  report.add_parameter("coins", p.coins);
  report.add_parameter("days", p.days);
  report.add_parameter("beta_range",
                       fmt_sig12(p.beta_lo) + ":" + fmt_sig12(p.beta_hi));
  report.add_parameter("noise", quantize_sig12(p.noise));
  report.add_parameter("anchor_vol", quantize_sig12(p.anchor_vol));
  report.add_parameter("seed", p.seed);
  report.write_file("prices.csv", prices_to_csv(series));
  announce(a.output_dir, report.finish());
  return 0;
}

struct FetchArgs {
  std::string config_file;
  std::string coins;
  std::string start;
  std::string end;
  std::string output_dir;
};

int run_fetch(const FetchArgs& a) {
  auto cfg = load_endpoint_config(a.config_file);
  std::vector<CoinId> coins;
  if (!a.coins.empty()) coins = split_list(a.coins);
  Date start = Date::parse(a.start);
  Date end = Date::parse(a.end);
  if (end < start) {
    raise(Errc::invalid_parameter, "--end is before --start");
  }
  Dataset data = fetch_remote(cfg, coins, start, end);

  ReportWriter report(a.output_dir, "fetch");
  report.add_input(a.config_file);
  report.add_parameter("coins", coins);
  report.add_parameter("start", a.start);
  report.add_parameter("end", a.end);
  std::vector<PriceSeries> series;
  std::vector<MarketSnapshot> snaps;
  for (const auto& [coin, s] : data.prices) series.push_back(s);
  for (const auto& [coin, s] : data.snapshot) snaps.push_back(s);
  report.write_file("prices.csv", prices_to_csv(series));
  report.write_file("snapshot.csv", snapshots_to_csv(snaps));
  report.write_json("dataset.json", dataset_to_json(data));
  announce(a.output_dir, report.finish());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cryptocurrency market statistics toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", coinstats::kToolVersion);

  ReturnsArgs returns_args;
  auto* returns_cmd = app.add_subcommand(
      "returns", "convert a price CSV into an aligned log-return panel");
  returns_cmd->alias("cmd_returns");
  returns_cmd->add_option("prices", returns_args.prices_file, "price CSV file")
      ->required();
  returns_cmd->add_option("--align", returns_args.align,
                          "intersection | union-with-missing");
  returns_cmd->add_option("--output-dir", returns_args.output_dir)->required();

  CorrArgs corr_args;
  auto* corr_cmd = app.add_subcommand(
      "corr", "correlation matrix and distribution from a return panel");
  corr_cmd->alias("cmd_corr");
  corr_cmd->add_option("panel", corr_args.panel_file, "panel CSV file")
      ->required();
  corr_cmd->add_option("--partial-anchor", corr_args.anchor,
                       "coin whose influence is removed");
  corr_cmd->add_option("--bins", corr_args.bins, "histogram bin count");
  corr_cmd->add_option("--min-overlap", corr_args.min_overlap,
                       "minimum joint observations per pair");
  corr_cmd->add_option("--output-dir", corr_args.output_dir)->required();

  ConcentrationArgs conc_args;
  auto* conc_cmd = app.add_subcommand(
      "concentration", "HHI and Gini concentration report from a snapshot");
  conc_cmd->alias("cmd_concentration");
  conc_cmd->add_option("snapshot", conc_args.snapshot_file, "snapshot CSV")
      ->required();
  conc_cmd->add_option("--indicators", conc_args.indicators,
                       "comma-separated indicator names");
  conc_cmd->add_option("--output-dir", conc_args.output_dir)->required();

  XcorrArgs xcorr_args;
  auto* xcorr_cmd = app.add_subcommand(
      "xcorr", "indicator vs price/market-cap correlation table");
  xcorr_cmd->alias("cmd_xcorr");
  xcorr_cmd->add_option("snapshot", xcorr_args.snapshot_file, "snapshot CSV")
      ->required();
  xcorr_cmd->add_option("--transform", xcorr_args.transform, "raw | log10");
  xcorr_cmd->add_option("--min-overlap", xcorr_args.min_overlap,
                        "minimum pairs per cell");
  xcorr_cmd->add_option("--output-dir", xcorr_args.output_dir)->required();

  DistArgs dist_args;
  auto* dist_cmd = app.add_subcommand(
      "dist", "log-scale histogram of one indicator");
  dist_cmd->alias("cmd_dist");
  dist_cmd->add_option("snapshot", dist_args.snapshot_file, "snapshot CSV")
      ->required();
  dist_cmd->add_option("--indicator", dist_args.indicator, "indicator name")
      ->required();
  dist_cmd->add_option("--bins", dist_args.bins, "histogram bin count");
  dist_cmd->add_option("--output-dir", dist_args.output_dir)->required();

  SimulateArgs sim_args;
  auto* sim_cmd = app.add_subcommand(
      "simulate", "generate a synthetic anchored market as a price CSV");
  sim_cmd->alias("cmd_simulate");
  sim_cmd->add_option("--coins", sim_args.coins, "total coins, anchor included");
  sim_cmd->add_option("--days", sim_args.days, "daily closes per coin");
  sim_cmd->add_option("--beta-range", sim_args.beta_range, "LO:HI");
  sim_cmd->add_option("--noise", sim_args.noise, "noise stddev");
  sim_cmd->add_option("--anchor-vol", sim_args.anchor_vol,
                      "anchor return stddev");
  sim_cmd->add_option("--seed", sim_args.seed, "RNG seed")->required();
  sim_cmd->add_option("--output-dir", sim_args.output_dir)->required();

  FetchArgs fetch_args;
  auto* fetch_cmd = app.add_subcommand(
      "fetch", "download prices and snapshots via a configured endpoint");
  fetch_cmd->alias("cmd_fetch");
  fetch_cmd->add_option("--config", fetch_args.config_file,
                        "endpoint configuration file")
      ->required();
  fetch_cmd->add_option("--coins", fetch_args.coins,
                        "comma-separated coin ids");
  fetch_cmd->add_option("--start", fetch_args.start, "YYYY-MM-DD")->required();
  fetch_cmd->add_option("--end", fetch_args.end, "YYYY-MM-DD")->required();
  fetch_cmd->add_option("--output-dir", fetch_args.output_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: code=invalid_parameter message=\"" << e.what()
              << "\"\n";
    return 2;
  }

  try {
    if (returns_cmd->parsed()) return run_returns(returns_args);
    if (corr_cmd->parsed()) return run_corr(corr_args);
    if (conc_cmd->parsed()) return run_concentration(conc_args);
    if (xcorr_cmd->parsed()) return run_xcorr(xcorr_args);
    if (dist_cmd->parsed()) return run_dist(dist_args);
    if (sim_cmd->parsed()) return run_simulate(sim_args);
    if (fetch_cmd->parsed()) return run_fetch(fetch_args);
  } catch (const coinstats::Error& e) {
    std::cerr << "error: code=" << e.code_name() << " message=\"" << e.what()
              << "\"\n";
    return coinstats::exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: code=internal message=\"" << e.what() << "\"\n";
    return 1;
  }
  return 2;
}

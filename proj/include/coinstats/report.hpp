#pragma once

#include <chrono>
#include <ctime>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "coinstats/concentration.hpp"
#include "coinstats/correlation.hpp"
#include "coinstats/csv.hpp"
#include "coinstats/digest.hpp"
#include "coinstats/error.hpp"
#include "coinstats/indicators.hpp"
#include "coinstats/numfmt.hpp"

namespace coinstats {

inline constexpr const char* kToolVersion = "0.1.0";

// --- correlation outputs ----------------------------------------------------

// Square headered layout: `coin,<coin>,...`, one row per coin.
inline std::string matrix_to_csv(const CorrelationMatrix& m) {
  std::string out = "coin";
  for (const auto& c : m.coins) {
    out += ',';
    out += csv_escape(c);
  }
  out += '\n';
  for (size_t i = 0; i < m.size(); ++i) {
    out += csv_escape(m.coins[i]);
    for (size_t j = 0; j < m.size(); ++j) {
      out += ',';
      out += fmt_sig12(m.value(i, j));
    }
    out += '\n';
  }
  return out;
}

// Same shape as matrix_to_csv but with per-pair observation counts.
inline std::string support_to_csv(const CorrelationMatrix& m) {
  std::string out = "coin";
  for (const auto& c : m.coins) {
    out += ',';
    out += csv_escape(c);
  }
  out += '\n';
  for (size_t i = 0; i < m.size(); ++i) {
    out += csv_escape(m.coins[i]);
    for (size_t j = 0; j < m.size(); ++j) {
      out += ',';
      out += std::to_string(m.support_at(i, j));
    }
    out += '\n';
  }
  return out;
}

inline std::string exclusions_to_csv(const std::vector<Exclusion>& ex) {
  std::string out = "coin,reason,detail\n";
  for (const auto& e : ex) {
    out += csv_escape(e.coin);
    out += ',';
    out += errc_name(e.reason);
    out += ',';
    out += csv_escape(e.detail);
    out += '\n';
  }
  return out;
}

inline nlohmann::json distribution_to_json(const DistributionSummary& d) {
  nlohmann::json j;
  j["count"] = d.count;
  j["median"] = quantize_sig12(d.median);
  j["mean"] = quantize_sig12(d.mean);
  j["stddev"] = quantize_sig12(d.stddev);
  nlohmann::json bins = nlohmann::json::array();
  for (const auto& b : d.histogram) {
    nlohmann::json bin;
    bin["lo"] = quantize_sig12(b.lo);
    bin["hi"] = quantize_sig12(b.hi);
    bin["count"] = b.count;
    bins.push_back(std::move(bin));
  }
  j["bins"] = std::move(bins);
  return j;
}

// --- concentration outputs --------------------------------------------------

inline std::string concentration_to_csv(
    const std::vector<ConcentrationResult>& rows) {
  std::string out =
      "indicator,n,skipped,hhi_raw,hhi_scaled,hhi_class,gini,disparity\n";
  for (const auto& r : rows) {
    out += r.indicator;
    out += ',';
    out += std::to_string(r.n);
    out += ',';
    out += std::to_string(r.skipped);
    out += ',';
    out += fmt_sig12(r.hhi_raw);
    out += ',';
    out += fmt_sig12(r.hhi_scaled);
    out += ',';
    out += to_string(r.hhi_class);
    out += ',';
    out += fmt_sig12(r.gini);
    out += ',';
    out += r.disparity ? "true" : "false";
    out += '\n';
  }
  return out;
}

inline nlohmann::json concentration_to_json(
    const std::vector<ConcentrationResult>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j;
    j["indicator"] = r.indicator;
    j["n"] = r.n;
    j["skipped"] = r.skipped;
    j["hhi_raw"] = quantize_sig12(r.hhi_raw);
    j["hhi_scaled"] = quantize_sig12(r.hhi_scaled);
    j["hhi_class"] = to_string(r.hhi_class);
    j["gini"] = quantize_sig12(r.gini);
    j["disparity"] = r.disparity;
    arr.push_back(std::move(j));
  }
  return arr;
}

// --- cross-correlation outputs ----------------------------------------------

// Long layout: one row per indicator x target. An unavailable cell keeps its
// r empty and carries the reason in `status`.
inline std::string xcorr_to_csv(const CrossCorrelationTable& table) {
  std::string out = "indicator,target,r,n,dropped_nonpositive,status\n";
  auto emit = [&out](const std::string& indicator, const char* target,
                     const CrossCell& cell) {
    out += indicator;
    out += ',';
    out += target;
    out += ',';
    if (cell.r) out += fmt_sig12(*cell.r);
    out += ',';
    out += std::to_string(cell.n);
    out += ',';
    out += std::to_string(cell.dropped_nonpositive);
    out += ',';
    out += cell.unavailable_reason ? errc_name(*cell.unavailable_reason) : "ok";
    out += '\n';
  };
  for (const auto& row : table.rows) {
    emit(row.indicator, "price", row.vs_price);
    emit(row.indicator, "market_cap", row.vs_market_cap);
  }
  return out;
}

inline nlohmann::json xcorr_to_json(const CrossCorrelationTable& table) {
  auto cell_json = [](const CrossCell& cell) {
    nlohmann::json j;
    if (cell.r) {
      j["r"] = quantize_sig12(*cell.r);
    } else {
      j["r"] = nullptr;
    }
    j["n"] = cell.n;
    j["dropped_nonpositive"] = cell.dropped_nonpositive;
    if (cell.unavailable_reason) {
      j["status"] = errc_name(*cell.unavailable_reason);
    } else {
      j["status"] = "ok";
    }
    return j;
  };
  nlohmann::json j;
  j["transform"] = to_string(table.transform);
  j["min_overlap"] = table.min_overlap;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json r;
    r["indicator"] = row.indicator;
    r["vs_price"] = cell_json(row.vs_price);
    r["vs_market_cap"] = cell_json(row.vs_market_cap);
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j;
}

// --- log-histogram outputs --------------------------------------------------

inline std::string log_histogram_to_csv(const LogHistogram& h) {
  std::string out = "bin_lo,bin_hi,count\n";
  for (const auto& b : h.bins) {
    out += fmt_sig12(b.lo);
    out += ',';
    out += fmt_sig12(b.hi);
    out += ',';
    out += std::to_string(b.count);
    out += '\n';
  }
  return out;
}

inline nlohmann::json log_histogram_to_json(const LogHistogram& h) {
  nlohmann::json j;
  j["indicator"] = h.indicator;
  j["included"] = h.included;
  j["excluded_nonpositive"] = h.excluded_nonpositive;
  j["log_mean"] = quantize_sig12(h.log_mean);
  j["log_stddev"] = quantize_sig12(h.log_stddev);
  j["log_skewness"] = quantize_sig12(h.log_skewness);
  nlohmann::json bins = nlohmann::json::array();
  for (const auto& b : h.bins) {
    nlohmann::json bin;
    bin["lo"] = quantize_sig12(b.lo);
    bin["hi"] = quantize_sig12(b.hi);
    bin["count"] = b.count;
    bins.push_back(std::move(bin));
  }
  j["bins"] = std::move(bins);
  return j;
}

// --- report bundle ----------------------------------------------------------

// Collects one command's output files under a directory and finishes with a
// manifest naming exactly what was written: inputs and outputs are digested,
// parameters recorded, and only `generated_at` carries wall-clock time.
class ReportWriter {
 public:
  ReportWriter(std::string output_dir, std::string command)
      : dir_(std::move(output_dir)), command_(std::move(command)) {
    std::filesystem::create_directories(dir_);
    parameters_ = nlohmann::json::object();
  }

  void add_parameter(const std::string& key, nlohmann::json value) {
    parameters_[key] = std::move(value);
  }

  void add_input(const std::string& path) {
    nlohmann::json j;
    j["path"] = path;
    j["fnv1a64"] = fnv1a64_hex(read_text_file(path));
    inputs_.push_back(std::move(j));
  }

  void write_file(const std::string& name, const std::string& content) {
    write_text_file((std::filesystem::path(dir_) / name).string(), content);
    nlohmann::json j;
    j["file"] = name;
    j["bytes"] = content.size();
    j["fnv1a64"] = fnv1a64_hex(content);
    outputs_.push_back(std::move(j));
  }

  void write_json(const std::string& name, const nlohmann::json& j) {
    write_file(name, j.dump(2) + "\n");
  }

  // Writes manifest.json and returns the list of files written (manifest
  // included, last).
  std::vector<std::string> finish() {
    nlohmann::json m;
    m["command"] = command_;
    m["tool_version"] = kToolVersion;
    m["parameters"] = parameters_;
    m["inputs"] = inputs_;
    m["outputs"] = outputs_;
    m["generated_at"] = now_utc();
    std::vector<std::string> files;
    for (const auto& o : outputs_) files.push_back(o.at("file"));
    write_text_file((std::filesystem::path(dir_) / "manifest.json").string(),
                    m.dump(2) + "\n");
    files.push_back("manifest.json");
    return files;
  }

 private:
  static std::string now_utc() {
    auto t = std::chrono::system_clock::to_time_t(
        std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
  }

  std::string dir_;
  std::string command_;
  nlohmann::json parameters_;
  std::vector<nlohmann::json> inputs_;
  std::vector<nlohmann::json> outputs_;
};

}  // namespace coinstats

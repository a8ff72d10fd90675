#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gelab/error.hpp"

namespace gelab::cli {

/// Bad flag combination or value; carries the exit code to use.
class UsageError : public Error {
 public:
  UsageError(const std::string& message, int exit_code = 2, Details details = {})
      : Error("UsageError", message, std::move(details)), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

struct GlobalOptions {
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  bool json_errors = false;
  bool write_error_file = false;
};

struct SimulateOptions {
  std::string config_path;
  std::string engine = "agent";
};

struct AnalyzeOptions {
  std::string panel_path;
  std::string start;
  std::string end;
  std::string base_date;
  // rd / rk
  double cutoff = 100.0;
  double bandwidth = 20.0;
  int order = 1;
  std::string kernel = "triangular";
  int bins = 20;
  double level = 0.95;
  double kink = 5e8;
  double lower = 1e8;
  /// 0 selects a window symmetric with the lower restriction.
  double upper = 0.0;
  double price_unit = 1e6;
  // did / pretrends
  std::string treated;
  std::string treated_file;
  std::string treated_set;
  std::string control;
  std::string control_file;
  std::string control_set;
  std::string implementation;
  std::string outcome = "price";
  std::string se;
  std::string method = "within";
  bool auto_control = false;
  double corr_threshold = 0.1;
  double price_floor = 1e5;
  std::string corr_start;
  std::string corr_end;
  // breaks
  std::string official_path;
  std::string sellers_path;
  std::vector<std::string> sources;
  std::string known_date;
  double trim = 0.15;
  double break_level = 0.05;
};

struct IngestOptions {
  std::string items;
  std::string items_file;
  std::string base_url;
  std::string cache_dir;
  std::string user_agent;
  int interval_ms = 1000;
  std::string step = "24h";
  std::string start;
  std::string end;
  std::string panel_path;
  std::string official_path;
  std::string sellers_path;
};

struct MonteCarloOptions {
  std::string config_path;
  std::string design;
  std::size_t reps = 200;
  unsigned threads = 1;
  std::string engine = "synth";
  double cutoff = 100.0;
  double bandwidth = 20.0;
  double kink = 5e8;
  double lower = 1e8;
  double price_unit = 1e6;
  std::string treated_set = "treated";
  std::string control_set = "non_sink_high_level";
  std::string implementation;
  std::string se = "hc1";
};

void cmd_simulate(const SimulateOptions& o, GlobalOptions& g, std::ostream& out);
void cmd_analyze_index(const AnalyzeOptions& o, GlobalOptions& g, std::ostream& out);
void cmd_analyze_rd(const AnalyzeOptions& o, GlobalOptions& g, std::ostream& out);
void cmd_analyze_rk(const AnalyzeOptions& o, GlobalOptions& g, std::ostream& out);
void cmd_analyze_did(const AnalyzeOptions& o, GlobalOptions& g, std::ostream& out);
void cmd_analyze_pretrends(const AnalyzeOptions& o, GlobalOptions& g, std::ostream& out);
void cmd_analyze_breaks(const AnalyzeOptions& o, GlobalOptions& g, std::ostream& out);
void cmd_ingest_api(const IngestOptions& o, GlobalOptions& g, std::ostream& out);
void cmd_ingest_csv(const IngestOptions& o, GlobalOptions& g, std::ostream& out);
void cmd_ingest_gp(const IngestOptions& o, GlobalOptions& g, std::ostream& out);
void cmd_montecarlo(const MonteCarloOptions& o, GlobalOptions& g, std::ostream& out);
void cmd_report(const std::string& dir, GlobalOptions& g, std::ostream& out);

/// Item ids separated by commas, whitespace or newlines.
std::vector<std::int64_t> parse_id_list(const std::string& text);

}  // namespace gelab::cli

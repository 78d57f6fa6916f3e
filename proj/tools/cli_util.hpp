#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hypwave/fuchsian.hpp"
#include "hypwave/hyperbolic.hpp"

namespace hypwave::cli {

using Json = nlohmann::ordered_json;

/// Shortest round-trip decimal representation of a double (std::to_chars),
/// so that equal values always serialize to equal bytes.
std::string fmt(double v);
std::string fmt(std::size_t v);
std::string fmt(int v);

/// Tabular output: '#'-prefixed audit comments, one header row, data rows.
/// Lines end with '\n'; cells containing separators are double-quoted.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  void comment(const std::string& line);
  void add(std::vector<std::string> cells);

  std::size_t rows() const { return rows_.size(); }
  const std::vector<std::string>& columns() const { return columns_; }

  std::string to_string() const;
  void write(const std::filesystem::path& file) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::string> comments_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes `text` to `file` exactly (binary mode, no transformation).
void write_text(const std::filesystem::path& file, const std::string& text);

/// Domain selection resolved from flags/config.  `declared_area` overrides
/// the computed area when the caller already knows it (e.g. a Dirichlet
/// domain whose area came from an external computation).
struct DomainConfig {
  std::string kind = "rectangle";      // rectangle | modular-standard | hecke
  double x_lo = 0.0, x_hi = 1.0;       // rectangle bounds
  double s_lo = 1.0, s_hi = 2.0;
  int q = 3;                           // hecke index
  double truncate = 0.0;               // 0 = untruncated
  std::optional<double> declared_area;

  DomainSpec build() const;            // throws std::invalid_argument
  Json to_json() const;                // resolved parameters, stable key order
};

/// Named-group selection for orbit-based subcommands.
struct GroupConfig {
  std::string name = "psl2z";          // psl2z | hecke
  int q = 3;

  GroupPresentation build() const;     // throws std::invalid_argument
  Json to_json() const;
};

/// One check outcome collected while a subcommand runs.  `observed` is the
/// measured residual/value, `budget` the bound it was held to.
struct CheckRow {
  std::string name;
  double observed = 0.0;
  double budget = 0.0;
  bool pass = false;
};

/// Accumulates checks and renders the shared record scaffolding.
class RunContext {
 public:
  RunContext(std::string subcommand, std::filesystem::path out_dir, bool plot);

  void anchor(const std::string& formula);
  void config(const std::string& key, const Json& value);

  /// Records a bounded check: pass iff observed <= budget.
  bool check(const std::string& name, double observed, double budget);
  /// Records a predicate check with a descriptive observed value.
  bool check_that(const std::string& name, bool pass, double observed,
                  double budget);

  bool all_passed() const;
  const std::vector<CheckRow>& checks() const { return checks_; }
  const Json& config_json() const { return config_; }

  /// Stamps the audit comments (tool, subcommand, prng, anchors, config)
  /// onto a table.
  void stamp(CsvTable& table) const;

  /// Writes <subcommand>.json containing the resolved config, anchors,
  /// per-check outcomes, extra results, and the overall status; returns the
  /// process exit code (0 pass, 1 fail).
  int finish(const Json& results);

  /// Failure-marker record: flushes whatever checks were collected with
  /// status "error" and the message, then returns `exit_code`.
  int abort_with(const std::string& message, int exit_code);

  /// Writes a CSV artifact (and, with --plot, a sibling .gp script).
  void emit(const std::string& stem, const CsvTable& table,
            const std::vector<std::string>& plot_lines = {});

  const std::filesystem::path& out_dir() const { return out_dir_; }

 private:
  Json record_base() const;
  void write_record(const Json& record) const;

  std::string subcommand_;
  std::filesystem::path out_dir_;
  bool plot_ = false;
  std::vector<std::string> anchors_;
  Json config_ = Json::object();
  std::vector<CheckRow> checks_;
};

}  // namespace hypwave::cli

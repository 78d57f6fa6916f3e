#include "cli_util.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include "hypwave/prng.hpp"

namespace hypwave::cli {

std::string fmt(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string fmt(std::size_t v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }

namespace {

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

CsvTable::CsvTable(std::vector<std::string> columns)
    : columns_(std::move(columns)) {}

void CsvTable::comment(const std::string& line) { comments_.push_back(line); }

void CsvTable::add(std::vector<std::string> cells) {
  if (cells.size() != columns_.size())
    throw std::logic_error("csv row width does not match the header");
  rows_.push_back(std::move(cells));
}

std::string CsvTable::to_string() const {
  std::string out;
  for (const auto& c : comments_) {
    out += "# ";
    out += c;
    out += '\n';
  }
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    if (j) out += ',';
    out += csv_escape(columns_[j]);
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += ',';
      out += csv_escape(row[j]);
    }
    out += '\n';
  }
  return out;
}

void CsvTable::write(const std::filesystem::path& file) const {
  write_text(file, to_string());
}

void write_text(const std::filesystem::path& file, const std::string& text) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + file.string());
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!os) throw std::runtime_error("short write: " + file.string());
}

DomainSpec DomainConfig::build() const {
  if (kind == "rectangle") {
    return DomainSpec::rectangle(x_lo, x_hi, s_lo, s_hi);
  }
  if (kind == "modular-standard") {
    auto dom = DomainSpec::modular_standard();
    return truncate > 0.0 ? dom.truncated(truncate) : dom;
  }
  if (kind == "hecke") {
    auto dom = DomainSpec::hecke(q);
    return truncate > 0.0 ? dom.truncated(truncate) : dom;
  }
  throw std::invalid_argument("unknown domain kind: " + kind);
}

Json DomainConfig::to_json() const {
  Json j;
  j["kind"] = kind;
  if (kind == "rectangle") {
    j["x_lo"] = x_lo;
    j["x_hi"] = x_hi;
    j["s_lo"] = s_lo;
    j["s_hi"] = s_hi;
  } else {
    if (kind == "hecke") j["q"] = q;
    if (truncate > 0.0) j["truncate"] = truncate;
  }
  if (declared_area) j["declared_area"] = *declared_area;
  return j;
}

GroupPresentation GroupConfig::build() const {
  if (name == "psl2z") return GroupPresentation::psl2z();
  if (name == "hecke") return GroupPresentation::hecke(q);
  throw std::invalid_argument("unknown group: " + name);
}

Json GroupConfig::to_json() const {
  Json j;
  j["name"] = name;
  if (name == "hecke") j["q"] = q;
  return j;
}

RunContext::RunContext(std::string subcommand, std::filesystem::path out_dir,
                       bool plot)
    : subcommand_(std::move(subcommand)),
      out_dir_(std::move(out_dir)),
      plot_(plot) {
  std::filesystem::create_directories(out_dir_);
}

void RunContext::anchor(const std::string& formula) {
  anchors_.push_back(formula);
}

void RunContext::config(const std::string& key, const Json& value) {
  config_[key] = value;
}

bool RunContext::check(const std::string& name, double observed,
                       double budget) {
  return check_that(name, observed <= budget, observed, budget);
}

bool RunContext::check_that(const std::string& name, bool pass,
                            double observed, double budget) {
  checks_.push_back({name, observed, budget, pass});
  return pass;
}

bool RunContext::all_passed() const {
  for (const auto& c : checks_)
    if (!c.pass) return false;
  return true;
}

void RunContext::stamp(CsvTable& table) const {
  table.comment("tool: hypwave");
  table.comment("subcommand: " + subcommand_);
  table.comment(std::string("prng: ") + Prng::kName);
  for (const auto& a : anchors_) table.comment("anchor: " + a);
  table.comment("config: " + config_.dump());
}

Json RunContext::record_base() const {
  Json record;
  record["tool"] = "hypwave";
  record["subcommand"] = subcommand_;
  record["prng"] = Prng::kName;
  record["anchors"] = anchors_;
  record["config"] = config_;
  return record;
}

void RunContext::write_record(const Json& record) const {
  std::string stem = subcommand_;
  for (auto& ch : stem)
    if (ch == '-') ch = '_';
  write_text(out_dir_ / (stem + ".json"), record.dump(2) + "\n");
}

int RunContext::finish(const Json& results) {
  Json record = record_base();
  record["results"] = results;
  Json checks = Json::array();
  Json failures = Json::array();
  for (const auto& c : checks_) {
    Json row;
    row["name"] = c.name;
    row["observed"] = c.observed;
    row["budget"] = c.budget;
    row["status"] = c.pass ? "pass" : "fail";
    checks.push_back(row);
    if (!c.pass) failures.push_back(c.name);
  }
  record["checks"] = checks;
  record["status"] = all_passed() ? "pass" : "fail";
  if (!failures.empty()) record["failures"] = failures;
  write_record(record);
  return all_passed() ? 0 : 1;
}

int RunContext::abort_with(const std::string& message, int exit_code) {
  Json record = record_base();
  Json checks = Json::array();
  for (const auto& c : checks_) {
    Json row;
    row["name"] = c.name;
    row["observed"] = c.observed;
    row["budget"] = c.budget;
    row["status"] = c.pass ? "pass" : "fail";
    checks.push_back(row);
  }
  record["checks"] = checks;
  record["status"] = "error";
  record["error"] = message;
  write_record(record);
  std::fprintf(stderr, "hypwave %s: %s\n", subcommand_.c_str(),
               message.c_str());
  return exit_code;
}

void RunContext::emit(const std::string& stem, const CsvTable& table,
                      const std::vector<std::string>& plot_lines) {
  table.write(out_dir_ / (stem + ".csv"));
  if (plot_ && !plot_lines.empty()) {
    std::string script = "# gnuplot script generated by hypwave " +
                         subcommand_ + "\n";
    script += "set datafile separator ','\n";
    for (const auto& line : plot_lines) script += line + "\n";
    write_text(out_dir_ / (stem + ".gp"), script);
  }
}

}  // namespace hypwave::cli

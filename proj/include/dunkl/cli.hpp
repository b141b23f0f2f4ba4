#pragma once

// Run configuration, report tables and the command bodies behind dunkl_cert.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "dunkl/inequalities.hpp"
#include "dunkl/kernels.hpp"

namespace dunkl::cli {

enum ExitCode : int { kOk = 0, kViolation = 1, kUsage = 2, kAccuracy = 3 };

enum class Format { csv, json };

struct RunConfig {
  std::string family = "dho";
  std::string form = "bessel";
  int d = 2;
  std::vector<double> kappa{1.0};  // one value (every axis) or d values
  std::vector<double> kappa_values;  // sweep over uniform kappa at fixed (t, x, y)
  double t_min = 0.05;
  double t_max = 5.0;
  int t_count = 8;
  int points = 64;  // (x, y) pairs per t, Harnack tuples, segments
  std::uint64_t seed = 20240611;
  double tol = -1.0;  // negative: each certificate's own tolerance
  Format format = Format::csv;
  std::string out;  // empty: standard output
  int jobs = 0;     // 0: all cores
  double t = 1.0;
  std::vector<double> x;  // empty: origin
  std::vector<double> y;

  Multiplicity multiplicity() const;
  Family parsed_family() const;
  Form parsed_form() const;
  GridSpec grid() const;
  Point point_x() const;
  Point point_y() const;
  /// Ordered key/value echo of every field, used in report headers.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

/// Set one field from its textual form. Keys accept '-' or '_'. Throws DomainError.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// Flat "key = value" lines; '#' starts a comment.
void load_config(RunConfig& cfg, std::istream& in);
void load_config_file(RunConfig& cfg, const std::string& path);

/// Comma or whitespace separated doubles.
std::vector<double> parse_list(const std::string& text);

using Cell = std::variant<std::string, double>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Summary {
  std::string name;
  std::size_t records = 0;
  double min_margin = 0.0;
  std::size_t violations = 0;
  double tolerance = 0.0;
};

struct Report {
  std::string command;
  Table table;
  std::vector<Summary> summaries;
  std::map<std::string, std::string> extra_meta;
};

/// "%.17g", with nan / inf spelled out.
std::string format_double(double v);

/// "# key = value" header lines, a header row and one line per record.
void write_csv(std::ostream& out, const RunConfig& cfg, const Report& report, const std::string& timestamp);
/// {"meta": {...}, "records": [...]}.
void write_json(std::ostream& out, const RunConfig& cfg, const Report& report, const std::string& timestamp);

/// Rows of an inequality report: certificate, s, t, x_1..x_d, y_1..y_d, lhs, bound, margin.
void append_report(Table& table, const InequalityReport& report, int width);
Table inequality_table(int width);

struct CommandResult {
  Report report;
  int exit_code = kOk;
};

CommandResult cmd_kernel(const RunConfig& cfg);
/// which: liyau-dho, liyau-dunkl, harnack-dho, harnack-dunkl, lemma41, phi, logconvex, all.
CommandResult cmd_certify(const RunConfig& cfg, const std::string& which);
CommandResult cmd_audit(const RunConfig& cfg);
CommandResult cmd_sweep(const RunConfig& cfg);

/// Runs one command, writes the report and a summary to log, maps exceptions to exit codes.
int run(const std::string& command, const std::string& which, const RunConfig& cfg, std::ostream& log);

}  // namespace dunkl::cli

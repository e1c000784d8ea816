#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace rdb {

/// One verdict line. `anchor` is the label of the statement being checked.
struct CheckResult {
  std::string name;
  std::string anchor;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
  std::string detail;
};

/// Pass when value <= threshold.
CheckResult check_at_most(std::string name, std::string anchor, double value, double threshold,
                          std::string detail = {});
/// Pass when value >= threshold.
CheckResult check_at_least(std::string name, std::string anchor, double value, double threshold,
                           std::string detail = {});

struct Report {
  std::string title;
  std::vector<CheckResult> checks;
  /// Free-form key/value lines kept in insertion order.
  std::vector<std::pair<std::string, std::string>> notes;
  std::vector<std::string> artifacts;

  bool passed() const;
  void add(CheckResult c) { checks.push_back(std::move(c)); }
  void note(std::string key, std::string value) { notes.emplace_back(std::move(key), std::move(value)); }
};

/// Shortest round-trip decimal text of a double.
std::string format_number(double value);

/// "PASS name [anchor] value=... threshold=... detail".
std::string format_check(const CheckResult& c);

std::string summary_text(const Report& report);
std::string json_text(const Report& report);

/// Writes summary.txt and report.json into `dir`, creating it if needed.
void write_report(const Report& report, const std::filesystem::path& dir);

/// CSV with a header row; numbers are written with format_number.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace rdb

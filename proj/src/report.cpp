#include "rdb/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "rdb/error.hpp"

namespace rdb {

CheckResult check_at_most(std::string name, std::string anchor, double value, double threshold, std::string detail) {
  return {std::move(name), std::move(anchor), value, threshold, value <= threshold, std::move(detail)};
}

CheckResult check_at_least(std::string name, std::string anchor, double value, double threshold,
                           std::string detail) {
  return {std::move(name), std::move(anchor), value, threshold, value >= threshold, std::move(detail)};
}

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, r.ptr);
}

std::string format_check(const CheckResult& c) {
  std::string line = c.passed ? "PASS " : "FAIL ";
  line += c.name;
  if (!c.anchor.empty()) line += " [" + c.anchor + "]";
  line += " value=" + format_number(c.value) + " threshold=" + format_number(c.threshold);
  if (!c.detail.empty()) line += " " + c.detail;
  return line;
}

std::string summary_text(const Report& report) {
  std::ostringstream out;
  out << report.title << '\n';
  for (const auto& [k, v] : report.notes) out << "  " << k << ": " << v << '\n';
  for (const CheckResult& c : report.checks) out << format_check(c) << '\n';
  const auto failed = std::count_if(report.checks.begin(), report.checks.end(), [](auto& c) { return !c.passed; });
  out << (report.passed() ? "OVERALL PASS" : "OVERALL FAIL") << " (" << report.checks.size() << " checks, " << failed
      << " failed)\n";
  return out.str();
}

namespace {

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

}  // namespace

std::string json_text(const Report& report) {
  nlohmann::ordered_json j;
  j["title"] = report.title;
  j["passed"] = report.passed();
  auto& notes = j["notes"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.notes) notes[k] = v;
  auto& checks = j["checks"] = nlohmann::ordered_json::array();
  for (const CheckResult& c : report.checks) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["anchor"] = c.anchor;
    e["value"] = number(c.value);
    e["threshold"] = number(c.threshold);
    e["passed"] = c.passed;
    e["detail"] = c.detail;
    checks.push_back(std::move(e));
  }
  j["artifacts"] = report.artifacts;
  return j.dump(2) + "\n";
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) fail(ErrorKind::Io, "write failed for " + path.string());
}

void write_report(const Report& report, const std::filesystem::path& dir) {
  write_text(dir / "summary.txt", summary_text(report));
  write_text(dir / "report.json", json_text(report));
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::string text;
  for (std::size_t i = 0; i < header.size(); ++i) text += (i ? "," : "") + header[i];
  text += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) text += (i ? "," : "") + format_number(row[i]);
    text += '\n';
  }
  write_text(path, text);
}

}  // namespace rdb

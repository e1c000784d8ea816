#include <doctest.h>

#include <cmath>
#include <cstring>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "rdb/error.hpp"
#include "rdb/io.hpp"
#include "rdb/report.hpp"
#include "support/expect.hpp"
#include "support/generators.hpp"

using namespace rdb;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("rdb_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("numbers round-trip through their text") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) CHECK(std::stod(format_number(v)) == v);
  CHECK(format_number(HUGE_VAL) == "inf");
  CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("check lines and verdicts") {
  const CheckResult ok = check_at_most("residual", "jul2327", 1e-6, 1e-4);
  const CheckResult bad = check_at_least("order", "", 1.5, 1.9, "note");
  CHECK(ok.passed);
  CHECK_FALSE(bad.passed);
  CHECK(format_check(ok) == "PASS residual [jul2327] value=1e-06 threshold=1e-04");
  CHECK(format_check(bad) == "FAIL order value=1.5 threshold=1.9 note");
  Report r;
  r.title = "t";
  r.add(ok);
  CHECK(r.passed());
  r.add(bad);
  CHECK_FALSE(r.passed());
  const std::string text = summary_text(r);
  CHECK(text.find("OVERALL FAIL (2 checks, 1 failed)") != std::string::npos);
}

TEST_CASE("json report is valid and carries every check") {
  Report r;
  r.title = "json";
  r.note("model", "combustion-exp");
  r.add(check_at_most("a", "x", 1.0, 2.0));
  r.add({"b", "", HUGE_VAL, 0.0, false, ""});
  const auto j = nlohmann::json::parse(json_text(r));
  CHECK(j["title"] == "json");
  CHECK(j["passed"] == false);
  CHECK(j["checks"].size() == 2);
  CHECK(j["checks"][1]["value"] == "inf");
  CHECK(j["notes"]["model"] == "combustion-exp");
  const auto dir = scratch("json");
  write_report(r, dir / "nested");
  CHECK(std::filesystem::exists(dir / "nested" / "summary.txt"));
  CHECK(std::filesystem::exists(dir / "nested" / "report.json"));
}

TEST_CASE("trajectory snapshots round-trip bit for bit") {
  const auto dir = scratch("traj");
  for (int dim : {1, 2}) {
    const Grid grid = make_grid(dim, 12.5, dim == 1 ? 16 : 8);
    SpaceTimeField f(grid);
    for (int k = 0; k < 4; ++k) f.append(0.25 * k, gen::noise_field(grid, 10 + k));
    const auto path = dir / ("f" + std::to_string(dim) + ".bin");
    write_trajectory_binary(f, path);
    CHECK(std::filesystem::file_size(path) == 40 + 4 * (8 + 8 * grid.size()));
    const SpaceTimeField g = read_trajectory_binary(path);
    CHECK(g.grid == grid);
    CHECK(g.times == f.times);
    for (std::size_t k = 0; k < f.frame_count(); ++k) CHECK(g.frames[k].values == f.frames[k].values);
  }
}

TEST_CASE("snapshot header layout is little-endian") {
  const auto dir = scratch("header");
  const Grid grid = make_grid(1, 2.0, 8);
  SpaceTimeField f(grid);
  f.append(0.0, Field::constant(grid, 1.0));
  f.append(0.5, Field::constant(grid, 2.0));
  write_trajectory_binary(f, dir / "h.bin");
  const std::string bytes = slurp(dir / "h.bin");
  REQUIRE(bytes.size() == 40 + 2 * 72);
  CHECK(static_cast<unsigned char>(bytes[0]) == 1);   // n
  CHECK(static_cast<unsigned char>(bytes[8]) == 8);   // N
  CHECK(static_cast<unsigned char>(bytes[32]) == 2);  // frames
  double dt = 0.0;
  std::memcpy(&dt, bytes.data() + 24, 8);
  CHECK(dt == 0.5);
}

TEST_CASE("malformed snapshots are io errors") {
  const auto dir = scratch("bad");
  write_text(dir / "short.bin", "abc");
  CHECK(expect::error_kind([&] { (void)read_trajectory_binary(dir / "short.bin"); }) == ErrorKind::Io);
  CHECK(expect::error_kind([&] { (void)read_trajectory_binary(dir / "missing.bin"); }) == ErrorKind::Io);
  const Grid grid = make_grid(1, 2.0, 8);
  SpaceTimeField f(grid);
  f.append(0.0, Field::constant(grid, 1.0));
  write_trajectory_binary(f, dir / "t.bin");
  std::string bytes = slurp(dir / "t.bin");
  bytes.resize(bytes.size() - 8);
  write_text(dir / "t.bin", bytes);
  CHECK(expect::error_kind([&] { (void)read_trajectory_binary(dir / "t.bin"); }) == ErrorKind::Io);
}

TEST_CASE("csv output") {
  const auto dir = scratch("csv");
  write_csv(dir / "a.csv", {"t", "v"}, {{0.0, 0.1}, {1.0, 1.0 / 3.0}});
  CHECK(slurp(dir / "a.csv") == "t,v\n0,0.1\n1,0.3333333333333333\n");
  const Grid grid = make_grid(2, 2.0, 8);
  SpaceTimeField f(grid);
  f.append(0.0, Field::constant(grid, 3.0));
  write_frames_csv(f, dir / "frames.csv");
  const std::string text = slurp(dir / "frames.csv");
  CHECK(text.rfind("t,x,y,value\n0,-1,-1,3\n0,-1,-0.75,3\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 65);
}

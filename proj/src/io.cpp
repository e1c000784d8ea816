#include "rdb/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "rdb/error.hpp"
#include "rdb/report.hpp"

namespace rdb {

namespace {

template <class T>
void put(std::ostream& out, T value) {
  static_assert(sizeof(T) == 8);
  std::uint64_t bits;
  std::memcpy(&bits, &value, 8);
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

template <class T>
T get(std::istream& in, const std::filesystem::path& path) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) fail(ErrorKind::Io, "truncated trajectory file " + path.string());
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  T value;
  std::memcpy(&value, &bits, 8);
  return value;
}

}  // namespace

void write_trajectory_binary(const SpaceTimeField& f, const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  put<std::int64_t>(out, f.grid.dim());
  put<std::int64_t>(out, f.grid.points());
  put<double>(out, f.grid.length());
  put<double>(out, f.frame_count() > 1 ? f.spacing() : 0.0);
  put<std::int64_t>(out, static_cast<std::int64_t>(f.frame_count()));
  for (std::size_t k = 0; k < f.frame_count(); ++k) {
    put<double>(out, f.times[k]);
    for (double v : f.frames[k].values) put<double>(out, v);
  }
  if (!out) fail(ErrorKind::Io, "write failed for " + path.string());
}

SpaceTimeField read_trajectory_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
  const auto dim = get<std::int64_t>(in, path);
  const auto points = get<std::int64_t>(in, path);
  const double length = get<double>(in, path);
  (void)get<double>(in, path);
  const auto frames = get<std::int64_t>(in, path);
  if (dim < 1 || dim > 2 || points < 2 || points > (1 << 24) || frames < 0 || !(length > 0.0))
    fail(ErrorKind::Io, "malformed trajectory header in " + path.string());
  SpaceTimeField f(make_grid(static_cast<int>(dim), length, static_cast<int>(points)));
  for (std::int64_t k = 0; k < frames; ++k) {
    const double t = get<double>(in, path);
    Field frame(f.grid);
    for (double& v : frame.values) v = get<double>(in, path);
    f.append(t, std::move(frame));
  }
  return f;
}

void write_frames_csv(const SpaceTimeField& f, const std::filesystem::path& path) {
  const bool two = f.grid.dim() == 2;
  std::vector<std::string> header{"t", "x"};
  if (two) header.push_back("y");
  header.push_back("value");
  std::vector<std::vector<double>> rows;
  rows.reserve(f.frame_count() * f.grid.size());
  for (std::size_t k = 0; k < f.frame_count(); ++k) {
    for (std::size_t p = 0; p < f.grid.size(); ++p) {
      const auto x = f.grid.point(p);
      if (two)
        rows.push_back({f.times[k], x[0], x[1], f.frames[k][p]});
      else
        rows.push_back({f.times[k], x[0], f.frames[k][p]});
    }
  }
  write_csv(path, header, rows);
}

}  // namespace rdb

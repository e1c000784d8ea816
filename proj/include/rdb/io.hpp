#pragma once

#include <filesystem>

#include "rdb/grid.hpp"

namespace rdb {

/// Flat little-endian snapshot: int64 n, int64 N, f64 L, f64 dt, int64 frame
/// count, then per frame the time followed by N^n values in grid order.
void write_trajectory_binary(const SpaceTimeField& f, const std::filesystem::path& path);
SpaceTimeField read_trajectory_binary(const std::filesystem::path& path);

/// Columns t, x (, y), value; one row per sample.
void write_frames_csv(const SpaceTimeField& f, const std::filesystem::path& path);

}  // namespace rdb

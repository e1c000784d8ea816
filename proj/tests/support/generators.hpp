#pragma once

#include <cmath>
#include <random>

#include "rdb/grid.hpp"

namespace gen {

/// Smooth random field: a handful of low Fourier modes with random amplitudes and phases.
inline rdb::Field smooth_field(const rdb::Grid& grid, std::uint64_t seed, int modes = 6, int max_index = 6) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0), phase(0.0, 6.283185307179586);
  std::uniform_int_distribution<int> index(-max_index, max_index);
  rdb::Field f(grid);
  const double base = 2.0 * 3.141592653589793 / grid.length();
  for (int m = 0; m < modes; ++m) {
    const double a = amp(rng), ph = phase(rng);
    const int i = index(rng), j = grid.dim() == 2 ? index(rng) : 0;
    for (std::size_t p = 0; p < f.size(); ++p) {
      const auto x = grid.point(p);
      f.values[p] += a * std::cos(base * (i * x[0] + j * x[1]) + ph);
    }
  }
  return f;
}

/// Independent uniform samples in [-1, 1].
inline rdb::Field noise_field(const rdb::Grid& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  rdb::Field f(grid);
  for (double& v : f.values) v = u(rng);
  return f;
}

}  // namespace gen

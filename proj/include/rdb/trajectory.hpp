#pragma once

#include <string>
#include <vector>

#include "rdb/grid.hpp"
#include "rdb/systems.hpp"

namespace rdb {

enum class RunStatus { Completed, BlowUp, Instability };

std::string_view to_string(RunStatus status);

/// Extremes seen over every step, not only the stored frames.
struct RunStats {
  int steps = 0;
  double fuel_max = 0.0;
  double fuel_min = 0.0;
  double product_max = 0.0;
  double product_min = 0.0;
  long clipped_values = 0;
  /// Most negative value that was clipped to zero.
  double deepest_clip = 0.0;
};

/// Stored frames of a run together with the reaction terms evaluated on them.
struct Trajectory {
  SystemSpec spec;
  std::vector<SpaceTimeField> fuels;        ///< u_i
  std::vector<SpaceTimeField> products;     ///< v_j
  std::vector<SpaceTimeField> consumption;  ///< p_i(U, V)
  std::vector<SpaceTimeField> production;   ///< f_j(U, V)
  double dt = 0.0;
  double horizon = 0.0;
  int stride = 1;
  RunStatus status = RunStatus::Completed;
  std::string message;
  RunStats stats;

  const Grid& grid() const { return fuels.front().grid; }
  std::size_t frame_count() const { return fuels.empty() ? 0 : fuels.front().frame_count(); }
};

}  // namespace rdb

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "relmech/bundle/coordinate_change.hpp"
#include "relmech/bundle/jet_point.hpp"
#include "relmech/connections/types.hpp"

namespace relmech {

/// Samples of a solution on a uniform time grid. Each sample's acceleration
/// slot holds the equation's value there.
struct Trajectory {
  std::vector<JetPoint2> samples;
  double step = 0.0;
  std::string tag;
  /// True when integration stopped early on a non-finite state.
  bool diverged = false;
};

/// Classic fixed-step RK4 on q' = v, v' = xi from p0 to t_end. When the span
/// is not a whole number of steps the step is shrunk uniformly so the last
/// sample lands on t_end.
Trajectory integrate(const DynamicEquation& xi, const JetPoint1& p0, double t_end, double step,
                     std::string tag = {});

/// Largest |(q[k+1] - 2 q[k] + q[k-1]) / h^2 - xi(t_k, q_k, v_k)| over the
/// interior samples.
double trajectory_residual(const DynamicEquation& xi, const Trajectory& tr);

/// Samplewise second-jet prolongation into the chart's coordinates.
Trajectory pushforward_trajectory(const CoordinateChange& chart, const Trajectory& tr);

}  // namespace relmech

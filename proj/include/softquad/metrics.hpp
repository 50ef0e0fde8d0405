// Trajectory-comparison metrics and cost-series analysis: settling time,
// time alignment of externally recorded trajectories onto the simulation
// grid, and the standard error measures (RMSE, MAE, NRMSE, accuracy).
#pragma once

#include <optional>
#include <string>
#include <vector>

namespace softquad {

// Uniformly or non-uniformly sampled scalar series.
struct TimedSeries {
  std::vector<double> t;
  std::vector<double> value;

  void validate() const;  // sizes match, timestamps strictly increasing
};

// Earliest time from which every subsequent sample stays below threshold.
// Returns nullopt when the series never settles (including a dip that
// re-exceeds the threshold later).
std::optional<double> settling_time(const TimedSeries& cost,
                                    double threshold = 0.01);

struct AlignedPair {
  std::vector<double> t;          // simulation grid restricted to the overlap
  std::vector<double> reference;  // simulation samples
  std::vector<double> measured;   // external samples interpolated onto t
};

// Linearly interpolates the external series onto the simulation time grid,
// trimming simulation samples outside the external range. Throws
// std::invalid_argument when the time ranges do not overlap.
AlignedPair time_align(const TimedSeries& external, const TimedSeries& sim);

struct ErrorMetrics {
  double rmse = 0.0;       // m
  double mae = 0.0;        // m
  double nrmse = 0.0;      // % of reference range; valid iff nrmse_defined
  double avg_error = 0.0;  // |mean error|, m
  double error_pct = 0.0;  // avg_error / range(reference) * 100
  double accuracy = 0.0;   // 100 - error_pct
  bool nrmse_defined = true;
};

// Error metrics of measured vs reference over an aligned pair.
ErrorMetrics compute_metrics(const AlignedPair& pair);

// Reads a trajectory CSV with rows `t,marker_id,x,y,z` and returns the
// series of one coordinate (0=x,1=y,2=z) for the requested marker.
TimedSeries read_trajectory_csv(const std::string& path,
                                const std::string& marker_id, int axis);

}  // namespace softquad

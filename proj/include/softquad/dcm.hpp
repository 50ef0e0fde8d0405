// Dynamic Constraint Map: a time x {Leg1..Leg4, Total} feasibility grid
// recording whether the applied control inputs satisfied the per-leg and
// total-system constraints at each tick, with CSV and SVG heatmap export.
#pragma once

#include <array>
#include <string>
#include <vector>

namespace softquad {

struct DcmGrid {
  std::vector<double> t;
  std::vector<std::array<bool, 4>> legs;  // per-leg constraint satisfaction
  std::vector<bool> total;                // total-system constraints

  void validate() const;  // non-empty, consistent sizes
  int infeasible_total_count() const;
};

// CSV with columns `t,leg1,leg2,leg3,leg4,total` (1 = feasible, 0 = not).
void write_dcm_csv(const DcmGrid& grid, const std::string& path);
DcmGrid read_dcm_csv(const std::string& path);

// SVG heatmap: one row per channel (Leg1..Leg4, Total), one cell per tick;
// green = feasible, red = infeasible.
void write_dcm_svg(const DcmGrid& grid, const std::string& path);

}  // namespace softquad

#include "softquad/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace softquad {

void TimedSeries::validate() const {
  if (t.size() != value.size()) {
    throw std::invalid_argument("series time/value size mismatch");
  }
  if (t.empty()) {
    throw std::invalid_argument("empty series");
  }
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) {
      throw std::invalid_argument("timestamps must be strictly increasing");
    }
  }
}

std::optional<double> settling_time(const TimedSeries& cost,
                                    double threshold) {
  cost.validate();
  // Scan backwards: the settled suffix is the maximal tail below threshold.
  std::optional<double> settled;
  for (std::size_t i = cost.t.size(); i-- > 0;) {
    if (cost.value[i] < threshold) {
      settled = cost.t[i];
    } else {
      break;
    }
  }
  return settled;
}

AlignedPair time_align(const TimedSeries& external, const TimedSeries& sim) {
  external.validate();
  sim.validate();
  const double lo = std::max(external.t.front(), sim.t.front());
  const double hi = std::min(external.t.back(), sim.t.back());
  if (lo > hi) {
    throw std::invalid_argument("time ranges do not overlap");
  }

  AlignedPair out;
  std::size_t seg = 0;  // external segment cursor; external.t is increasing
  for (std::size_t i = 0; i < sim.t.size(); ++i) {
    const double ti = sim.t[i];
    if (ti < lo || ti > hi) continue;
    while (seg + 2 < external.t.size() && external.t[seg + 1] < ti) ++seg;
    const double t0 = external.t[seg];
    const double t1 = external.t[seg + 1 < external.t.size() ? seg + 1 : seg];
    double v;
    if (t1 == t0) {
      v = external.value[seg];
    } else {
      const double a = std::clamp((ti - t0) / (t1 - t0), 0.0, 1.0);
      v = external.value[seg] +
          a * (external.value[seg + 1] - external.value[seg]);
    }
    out.t.push_back(ti);
    out.reference.push_back(sim.value[i]);
    out.measured.push_back(v);
  }
  if (out.t.empty()) {
    throw std::invalid_argument("no simulation samples inside the overlap");
  }
  return out;
}

ErrorMetrics compute_metrics(const AlignedPair& pair) {
  const std::size_t n = pair.t.size();
  if (n == 0 || pair.reference.size() != n || pair.measured.size() != n) {
    throw std::invalid_argument("aligned pair is empty or size-mismatched");
  }
  double sum_sq = 0.0, sum_abs = 0.0, sum = 0.0;
  double ref_min = pair.reference[0], ref_max = pair.reference[0];
  for (std::size_t i = 0; i < n; ++i) {
    const double e = pair.measured[i] - pair.reference[i];
    sum_sq += e * e;
    sum_abs += std::abs(e);
    sum += e;
    ref_min = std::min(ref_min, pair.reference[i]);
    ref_max = std::max(ref_max, pair.reference[i]);
  }
  ErrorMetrics m;
  m.rmse = std::sqrt(sum_sq / static_cast<double>(n));
  m.mae = sum_abs / static_cast<double>(n);
  m.avg_error = std::abs(sum / static_cast<double>(n));
  const double range = ref_max - ref_min;
  if (range > 0.0) {
    m.nrmse = m.rmse / range * 100.0;
    m.error_pct = m.avg_error / range * 100.0;
    m.accuracy = 100.0 - m.error_pct;
    m.nrmse_defined = true;
  } else {
    m.nrmse = 0.0;
    m.error_pct = 0.0;
    m.accuracy = 100.0;
    m.nrmse_defined = false;
  }
  return m;
}

TimedSeries read_trajectory_csv(const std::string& path,
                                const std::string& marker_id, int axis) {
  if (axis < 0 || axis > 2) {
    throw std::invalid_argument("axis must be 0, 1, or 2");
  }
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open trajectory file: " + path);
  }
  TimedSeries series;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string t_str, id, x_str, y_str, z_str;
    if (!std::getline(row, t_str, ',') || !std::getline(row, id, ',') ||
        !std::getline(row, x_str, ',') || !std::getline(row, y_str, ',') ||
        !std::getline(row, z_str, ',')) {
      throw std::runtime_error("malformed trajectory row: " + line);
    }
    if (first && t_str == "t") {  // optional header row
      first = false;
      continue;
    }
    first = false;
    if (id != marker_id) continue;
    const std::string& coord = axis == 0 ? x_str : (axis == 1 ? y_str : z_str);
    series.t.push_back(std::stod(t_str));
    series.value.push_back(std::stod(coord));
  }
  if (series.t.empty()) {
    throw std::runtime_error("no samples for marker '" + marker_id + "' in " +
                             path);
  }
  series.validate();
  return series;
}

}  // namespace softquad

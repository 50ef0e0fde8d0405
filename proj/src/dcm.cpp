#include "softquad/dcm.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace softquad {

void DcmGrid::validate() const {
  if (t.empty()) {
    throw std::invalid_argument("empty constraint map");
  }
  if (legs.size() != t.size() || total.size() != t.size()) {
    throw std::invalid_argument("constraint map column size mismatch");
  }
}

int DcmGrid::infeasible_total_count() const {
  return static_cast<int>(std::count(total.begin(), total.end(), false));
}

void write_dcm_csv(const DcmGrid& grid, const std::string& path) {
  grid.validate();
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  out << "t,leg1,leg2,leg3,leg4,total\n";
  char buf[64];
  for (std::size_t i = 0; i < grid.t.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.6f", grid.t[i]);
    out << buf;
    for (int leg = 0; leg < 4; ++leg) {
      out << ',' << (grid.legs[i][leg] ? 1 : 0);
    }
    out << ',' << (grid.total[i] ? 1 : 0) << '\n';
  }
}

DcmGrid read_dcm_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  DcmGrid grid;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field[6];
    for (int c = 0; c < 6; ++c) {
      if (!std::getline(row, field[c], ',')) {
        throw std::runtime_error("malformed constraint-map row: " + line);
      }
    }
    if (first && field[0] == "t") {
      first = false;
      continue;
    }
    first = false;
    grid.t.push_back(std::stod(field[0]));
    std::array<bool, 4> legs{};
    for (int leg = 0; leg < 4; ++leg) legs[leg] = std::stoi(field[1 + leg]) != 0;
    grid.legs.push_back(legs);
    grid.total.push_back(std::stoi(field[5]) != 0);
  }
  grid.validate();
  return grid;
}

void write_dcm_svg(const DcmGrid& grid, const std::string& path) {
  grid.validate();
  const int n = static_cast<int>(grid.t.size());
  const double cell_w = std::max(2.0, 900.0 / n);
  const double cell_h = 40.0;
  const double left = 70.0, top = 20.0, bottom = 40.0;
  const double width = left + cell_w * n + 20.0;
  const double height = top + cell_h * 5 + bottom;

  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
      << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  const char* labels[5] = {"Leg 1", "Leg 2", "Leg 3", "Leg 4", "Total"};
  for (int row = 0; row < 5; ++row) {
    const double y = top + row * cell_h;
    out << "<text x=\"" << left - 8 << "\" y=\"" << y + cell_h / 2 + 4
        << "\" text-anchor=\"end\" font-size=\"13\" font-family=\"sans-serif\">"
        << labels[row] << "</text>\n";
    for (int i = 0; i < n; ++i) {
      const bool ok = row < 4 ? grid.legs[i][row] : grid.total[i];
      out << "<rect x=\"" << left + i * cell_w << "\" y=\"" << y
          << "\" width=\"" << cell_w << "\" height=\"" << cell_h
          << "\" fill=\"" << (ok ? "#2ca02c" : "#d62728") << "\"/>\n";
    }
  }
  // Time axis: first, middle, last tick labels.
  const int marks[3] = {0, n / 2, n - 1};
  for (int k = 0; k < 3; ++k) {
    const int i = marks[k];
    std::ostringstream label;
    label.precision(2);
    label << std::fixed << grid.t[i];
    out << "<text x=\"" << left + (i + 0.5) * cell_w << "\" y=\""
        << top + 5 * cell_h + 18
        << "\" text-anchor=\"middle\" font-size=\"12\" "
           "font-family=\"sans-serif\">"
        << label.str() << "</text>\n";
  }
  out << "<text x=\"" << left + cell_w * n / 2 << "\" y=\"" << height - 6
      << "\" text-anchor=\"middle\" font-size=\"13\" "
         "font-family=\"sans-serif\">time [s]</text>\n";
  out << "</svg>\n";
}

}  // namespace softquad

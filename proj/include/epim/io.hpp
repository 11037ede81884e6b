#pragma once

#include <string>
#include <vector>

#include "epim/validity_sim.hpp"

namespace epim {

// One (x, y, series-label) row of figure data.
struct SeriesPoint {
  double x = 0.0;
  double y = 0.0;
  std::string series;
};

// Full-precision float formatting (round-trip, shortest form), so identical
// runs produce byte-identical files.
std::string format_double(double v);

void write_series_csv(const std::string& path, const std::vector<SeriesPoint>& rows);
void write_growth_csv(const std::string& path, const GrowthTable& table);
std::string sim_report_json(const SimReport& report);
std::string contraction_report_json(const ContractionReport& report);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace epim

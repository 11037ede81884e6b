#include "epim/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace epim {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  // shortest representation that parses back to the same double
  for (int prec = 1; prec <= 17; ++prec) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return "0";  // unreachable: precision 17 always round-trips
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path);
}

void write_series_csv(const std::string& path, const std::vector<SeriesPoint>& rows) {
  std::ostringstream os;
  os << "x,y,series\n";
  for (const auto& r : rows) {
    os << format_double(r.x) << ',' << format_double(r.y) << ',' << r.series << '\n';
  }
  write_text_file(path, os.str());
}

void write_growth_csv(const std::string& path, const GrowthTable& table) {
  std::ostringstream os;
  os << "n";
  for (const auto& label : table.labels) {
    os << ',' << label << ',' << label << "_se";
  }
  os << '\n';
  for (size_t i = 0; i < table.ns.size(); ++i) {
    os << table.ns[i];
    for (size_t c = 0; c < table.labels.size(); ++c) {
      os << ',' << format_double(table.mean_log[c][i]) << ','
         << format_double(table.se_log[c][i]);
    }
    os << '\n';
  }
  write_text_file(path, os.str());
}

namespace {

nlohmann::ordered_json finite_or_string(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

}  // namespace

std::string sim_report_json(const SimReport& report) {
  nlohmann::ordered_json j;
  j["check"] = report.check;
  j["label"] = report.label;
  j["reps"] = report.reps;
  j["master_seed"] = report.master_seed;
  j["all_pass"] = report.all_pass;
  if (report.check == "decision") {
    j["pointwise_all"] = report.pointwise_all;
    j["pointwise_failures"] = report.pointwise_failures;
  }
  j["rates"] = nlohmann::ordered_json::array();
  for (const auto& r : report.rates) {
    nlohmann::ordered_json row;
    row["rule"] = r.rule;
    row["alpha"] = r.alpha;
    row["rate"] = r.rate;
    row["se"] = r.se;
    row["pass"] = r.pass;
    j["rates"].push_back(row);
  }
  j["means"] = nlohmann::ordered_json::array();
  for (const auto& m : report.means) {
    nlohmann::ordered_json row;
    row["rule"] = m.rule;
    row["mean"] = finite_or_string(m.mean);
    row["se"] = finite_or_string(m.se);
    row["pass"] = m.pass;
    j["means"].push_back(row);
  }
  return j.dump(2) + "\n";
}

std::string contraction_report_json(const ContractionReport& report) {
  nlohmann::ordered_json j;
  j["check"] = "contraction";
  j["all_pass"] = report.all_pass;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    nlohmann::ordered_json row;
    row["h_lo"] = r.h_lo;
    row["h_hi"] = r.h_hi;
    row["prior_upper"] = r.prior_upper;
    row["max_posterior_upper"] = r.max_posterior_upper;
    row["prior_lower"] = r.prior_lower;
    row["min_posterior_lower"] = r.min_posterior_lower;
    row["pass"] = r.pass;
    j["rows"].push_back(row);
  }
  return j.dump(2) + "\n";
}

}  // namespace epim

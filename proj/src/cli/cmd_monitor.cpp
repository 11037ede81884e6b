#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "epim/calibration.hpp"
#include "epim/eprocess.hpp"
#include "epim/io.hpp"
#include "epim/possibility.hpp"
#include "epim/regularization.hpp"
#include "run_config.hpp"

namespace epim::cli {

namespace {

std::string trimmed(const std::string& s) {
  size_t lo = s.find_first_not_of(" \t\r");
  if (lo == std::string::npos) return "";
  size_t hi = s.find_last_not_of(" \t\r");
  return s.substr(lo, hi - lo + 1);
}

bool parse_obs(const std::string& line, double* out) {
  const char* begin = line.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin) return false;
  while (*end == ' ' || *end == '\t') ++end;
  if (*end != '\0') return false;
  if (!std::isfinite(v)) return false;
  *out = v;
  return true;
}

}  // namespace

// Streams observations (one per line, file or stdin), printing after each
// one the running min over the hypothesis of log e^reg, the alpha-level
// confidence hull, and STOP/CONTINUE against the e-value threshold.
int cmd_monitor(const RunConfig& cfg, const std::string& source) {
  std::ifstream file;
  std::istream* in = &std::cin;
  if (source != "-") {
    file.open(source);
    if (!file) throw DataError("cannot open observation file '" + source + "'");
    in = &file;
  }

  Grid1D grid = config_grid(cfg);
  double alpha = cfg.num("alpha");
  if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("alpha must lie in (0, 1)");
  double threshold = cfg.num("monitor_threshold");
  if (!(threshold > 0.0)) throw UsageError("monitor_threshold must be > 0");
  double log_threshold = std::log(threshold);

  Regularizer rho;
  std::string rname = cfg.str("monitor_regularizer");
  if (rname == "vacuous") {
    rho = vacuous_regularizer();
  } else if (rname == "gaussian_surprise") {
    rho = regularizer_from_contour(
        make_prior(PriorKind::gaussian_surprise, cfg.num("monitor_prior_k"), grid),
        beta_mixture_calibrator(cfg.num("calibrator_kappa")));
  } else {
    throw UsageError("monitor_regularizer must be vacuous or gaussian_surprise, got '" + rname +
                     "'");
  }
  RegularizedEProcess ereg = regularize(savage_dickey_gaussian(cfg.num("sd_variance")), rho);

  double h_lo = cfg.num("monitor_h_lo"), h_hi = cfg.num("monitor_h_hi");
  std::vector<char> hypothesis(static_cast<size_t>(grid.nodes), 0);
  int h_count = 0;
  for (int i = 0; i < grid.nodes; ++i) {
    if (grid.point(i) >= h_lo && grid.point(i) <= h_hi) {
      hypothesis[static_cast<size_t>(i)] = 1;
      ++h_count;
    }
  }
  if (h_count == 0) {
    throw UsageError("monitor hypothesis [monitor_h_lo, monitor_h_hi] contains no grid nodes");
  }

  Dataset data;
  int n = 0, skipped = 0;
  std::string line;
  while (std::getline(*in, line)) {
    std::string t = trimmed(line);
    if (t.empty()) continue;
    double z = 0.0;
    if (!parse_obs(t, &z)) {
      ++skipped;
      std::cerr << "warning: skipping unparseable line '" << t << "'\n";
      continue;
    }
    data.append(z);
    ++n;
    CompositeTestResult test = composite_test(ereg, data, n, hypothesis, alpha, grid);
    ConfidenceRegion region = confidence_region(ereg, data, n, alpha, grid);
    std::cout << "n=" << n << " min_log_ereg=" << format_double(test.min_log_e) << " region="
              << (region.empty ? std::string("empty")
                               : "[" + format_double(region.hull_lo) + "," +
                                     format_double(region.hull_hi) + "]")
              << " decision=" << (test.min_log_e >= log_threshold ? "STOP" : "CONTINUE") << "\n";
  }
  if (skipped > 0) {
    std::cerr << "warning: skipped " << skipped << " unparseable line(s)\n";
    return 2;
  }
  return 0;
}

}  // namespace epim::cli

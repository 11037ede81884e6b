#include "epim/eprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace epim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

void check_prefix(const Dataset& data, int n) {
  if (n < 0 || n > data.size()) {
    throw std::out_of_range("prefix length " + std::to_string(n) + " outside dataset of size " +
                            std::to_string(data.size()));
  }
}

double log_normal_pdf(double x, double mean, double var) {
  double d = x - mean;
  return -0.5 * std::log(2.0 * kPi * var) - d * d / (2.0 * var);
}

double sd_log_e(double v, int n, double mean, double theta) {
  if (n == 0) return 0.0;
  double d = theta - mean;
  double nv1 = n * v + 1.0;
  return -0.5 * std::log(nv1) + 0.5 * n * d * d - (n / (2.0 * nv1)) * mean * mean;
}

// Count term s*log(hat/t) with the 0*log 0 = 0 convention; a positive count
// against t = 0 is +infinity.
double count_term(double s, double hat, double t) {
  if (s == 0.0) return 0.0;
  if (t <= 0.0) return kInf;
  return s * (std::log(hat) - std::log(t));
}

double median_of_sorted(const std::vector<double>& s) {
  size_t k = s.size();
  if (k % 2 == 1) return s[k / 2];
  return 0.5 * (s[k / 2 - 1] + s[k / 2]);
}

}  // namespace

Dataset Dataset::from_observations(std::vector<double> z) {
  Dataset d;
  d.obs = std::move(z);
  return d;
}

Dataset Dataset::from_counts(const WareCounts& c) {
  if (c.survivals_cmt < 0 || c.deaths_cmt < 0 || c.survivals_ecmo < 0 || c.deaths_ecmo < 0) {
    throw std::invalid_argument("negative count");
  }
  Dataset d;
  d.counts = c;
  d.has_counts = true;
  return d;
}

double RegularizedEProcess::log_value(const Dataset& data, int n, double theta) const {
  if (!base.log_e) throw std::invalid_argument("base e-process lacks a 1D evaluator");
  if (!rho.log_rho) throw std::invalid_argument("regularizer lacks a 1D evaluator");
  return rho.log_rho(theta) + base.log_e(data, n, theta);
}

double RegularizedEProcess::log_value2(const Dataset& data, double theta_cmt,
                                       double theta_ecmo) const {
  if (!base.log_e2) throw std::invalid_argument("base e-process lacks a 2D evaluator");
  if (!rho.log_rho2) throw std::invalid_argument("regularizer lacks a 2D evaluator");
  return rho.log_rho2(theta_cmt, theta_ecmo) + base.log_e2(data, theta_cmt, theta_ecmo);
}

std::vector<double> RegularizedEProcess::log_value_path(const Dataset& data, int n_max,
                                                        double theta) const {
  if (!base.log_path) throw std::invalid_argument("base e-process lacks a path evaluator");
  if (!rho.log_rho) throw std::invalid_argument("regularizer lacks a 1D evaluator");
  std::vector<double> path = base.log_path(data, n_max, theta);
  double lr = rho.log_rho(theta);
  for (double& x : path) x += lr;
  return path;
}

RegularizedEProcess regularize(const EProcess& base, const Regularizer& rho) {
  RegularizedEProcess r;
  r.base = base;
  r.rho = rho;
  return r;
}

EProcess savage_dickey_gaussian(double v) {
  if (!(v > 0.0)) throw std::invalid_argument("mixture variance v must be positive");
  EProcess e;
  e.family = "savage_dickey_gaussian";
  e.log_e = [v](const Dataset& data, int n, double theta) {
    check_prefix(data, n);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += data.obs[static_cast<size_t>(i)];
    double mean = n > 0 ? sum / n : 0.0;
    return sd_log_e(v, n, mean, theta);
  };
  e.log_path = [v](const Dataset& data, int n_max, double theta) {
    check_prefix(data, n_max);
    std::vector<double> path(static_cast<size_t>(n_max) + 1, 0.0);
    double sum = 0.0;
    for (int k = 1; k <= n_max; ++k) {
      sum += data.obs[static_cast<size_t>(k - 1)];
      path[static_cast<size_t>(k)] = sd_log_e(v, k, sum / k, theta);
    }
    return path;
  };
  return e;
}

double savage_dickey_quadrature_oracle(double v, const Dataset& data, int n, double theta,
                                       int quad_nodes) {
  if (!(v > 0.0)) throw std::invalid_argument("mixture variance v must be positive");
  if (quad_nodes < 10000) throw std::invalid_argument("quad_nodes must be >= 10000");
  check_prefix(data, n);
  if (n < 1) throw std::invalid_argument("quadrature oracle needs n >= 1");
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += data.obs[static_cast<size_t>(i)];
  double mean = sum / n;

  int m = quad_nodes;
  if (m % 2 == 0) ++m;  // Simpson needs an even interval count
  double half = 10.0 * std::sqrt(v + 1.0);
  double lo = mean - half, hi = mean + half;
  double h = (hi - lo) / (m - 1);

  // Simpson in log domain: log sum of w_i * exp(g_i) via a running max shift.
  std::vector<double> g(static_cast<size_t>(m));
  double gmax = -kInf;
  for (int i = 0; i < m; ++i) {
    double t = lo + h * i;
    g[static_cast<size_t>(i)] = log_normal_pdf(mean, t, 1.0 / n) + log_normal_pdf(t, 0.0, v);
    gmax = std::max(gmax, g[static_cast<size_t>(i)]);
  }
  double acc = 0.0;
  for (int i = 0; i < m; ++i) {
    double w = (i == 0 || i == m - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    acc += w * std::exp(g[static_cast<size_t>(i)] - gmax);
  }
  double log_integral = gmax + std::log(acc * h / 3.0);
  return std::exp(log_integral - log_normal_pdf(mean, theta, 1.0 / n));
}

EProcess ware_binomial(double survivals_cmt, double deaths_cmt, double survivals_ecmo,
                       double deaths_ecmo, double beta) {
  WareCounts c{survivals_cmt, deaths_cmt, survivals_ecmo, deaths_ecmo};
  if (c.survivals_cmt < 0 || c.deaths_cmt < 0 || c.survivals_ecmo < 0 || c.deaths_ecmo < 0) {
    throw std::invalid_argument("negative count");
  }
  if (beta < 0.0) throw std::invalid_argument("smoothing beta must be >= 0");
  if (beta == 0.0 && (c.survivals_cmt + c.deaths_cmt == 0.0 || c.survivals_ecmo + c.deaths_ecmo == 0.0)) {
    throw std::invalid_argument("empty arm with beta = 0 leaves the plug-in undefined");
  }
  auto arm = [](double s, double d, double beta_, double t) {
    double hat = (s + beta_) / (s + d + 2.0 * beta_);
    return count_term(s, hat, t) + count_term(d, 1.0 - hat, 1.0 - t);
  };
  EProcess e;
  e.family = "ware_binomial";
  e.is2d = true;
  e.log_e2 = [c, beta, arm](const Dataset&, double theta_cmt, double theta_ecmo) {
    if (theta_cmt < 0.0 || theta_cmt > 1.0 || theta_ecmo < 0.0 || theta_ecmo > 1.0) {
      throw std::domain_error("success probabilities must lie in [0,1]");
    }
    return arm(c.survivals_cmt, c.deaths_cmt, beta, theta_cmt) +
           arm(c.survivals_ecmo, c.deaths_ecmo, beta, theta_ecmo);
  };
  return e;
}

EProcess median_quasi_eprocess(double eta, double theta_hat_0) {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  EProcess e;
  e.family = "median_quasi";
  e.log_path = [eta, theta_hat_0](const Dataset& data, int n_max, double theta) {
    check_prefix(data, n_max);
    std::vector<double> path(static_cast<size_t>(n_max) + 1, 0.0);
    std::vector<double> sorted;
    sorted.reserve(static_cast<size_t>(n_max));
    double m_prev = theta_hat_0;
    double sum = 0.0;
    for (int i = 0; i < n_max; ++i) {
      double z = data.obs[static_cast<size_t>(i)];
      sum += std::abs(z - m_prev) - std::abs(z - theta);
      path[static_cast<size_t>(i) + 1] = -eta * sum;
      sorted.insert(std::upper_bound(sorted.begin(), sorted.end(), z), z);
      m_prev = median_of_sorted(sorted);
    }
    return path;
  };
  e.log_e = [e](const Dataset& data, int n, double theta) {
    return e.log_path(data, n, theta).back();
  };
  return e;
}

double eta_upper_bound(double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  return 2.0 * epsilon;
}

std::string StoppingRule::label() const {
  std::ostringstream os;
  switch (kind) {
    case RuleKind::fixed:
      os << "fixed(n=" << n << ")";
      break;
    case RuleKind::threshold:
      os << "threshold(c=" << c << ",h=" << horizon << ")";
      break;
    case RuleKind::horizon:
      os << "horizon(N=" << horizon << ")";
      break;
  }
  return os.str();
}

StoppingRule StoppingRule::make_fixed(int n) {
  if (n < 0) throw std::invalid_argument("fixed rule needs n >= 0");
  StoppingRule r;
  r.kind = RuleKind::fixed;
  r.n = n;
  return r;
}

StoppingRule StoppingRule::make_threshold(double c, int horizon) {
  if (!(c > 0.0)) throw std::invalid_argument("threshold level must be positive");
  if (horizon < 1) throw std::invalid_argument("threshold horizon must be >= 1");
  StoppingRule r;
  r.kind = RuleKind::threshold;
  r.c = c;
  r.horizon = horizon;
  return r;
}

StoppingRule StoppingRule::make_horizon(int n_max) {
  if (n_max < 1) throw std::invalid_argument("horizon must be >= 1");
  StoppingRule r;
  r.kind = RuleKind::horizon;
  r.horizon = n_max;
  return r;
}

int stop_index(const StoppingRule& rule, const std::vector<double>& epath) {
  int size = static_cast<int>(epath.size());
  switch (rule.kind) {
    case RuleKind::fixed:
      if (rule.n > size) throw std::out_of_range("fixed rule beyond the path");
      return rule.n;
    case RuleKind::threshold: {
      int limit = std::min(rule.horizon, size);
      for (int i = 0; i < limit; ++i) {
        if (epath[static_cast<size_t>(i)] >= rule.c) return i + 1;
      }
      return limit;
    }
    case RuleKind::horizon:
      return std::min(rule.horizon, size);
  }
  throw std::logic_error("unknown rule kind");
}

int stop_index_log(const StoppingRule& rule, const std::vector<double>& log_epath) {
  if (log_epath.empty()) throw std::invalid_argument("empty log path");
  int n_max = static_cast<int>(log_epath.size()) - 1;
  switch (rule.kind) {
    case RuleKind::fixed:
      if (rule.n > n_max) throw std::out_of_range("fixed rule beyond the path");
      return rule.n;
    case RuleKind::threshold: {
      int limit = std::min(rule.horizon, n_max);
      double log_c = std::log(rule.c);
      for (int k = 1; k <= limit; ++k) {
        if (log_epath[static_cast<size_t>(k)] >= log_c) return k;
      }
      return limit;
    }
    case RuleKind::horizon:
      return std::min(rule.horizon, n_max);
  }
  throw std::logic_error("unknown rule kind");
}

ConfidenceRegion confidence_region(const RegularizedEProcess& ereg, const Dataset& data,
                                   int n, double alpha, const Grid1D& grid) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0,1)");
  grid.validate();
  ConfidenceRegion region;
  region.mask.assign(static_cast<size_t>(grid.nodes), 0);
  double bound = -std::log(alpha);
  for (int i = 0; i < grid.nodes; ++i) {
    double t = grid.point(i);
    if (ereg.log_value(data, n, t) <= bound) {
      region.mask[static_cast<size_t>(i)] = 1;
      if (region.empty) {
        region.empty = false;
        region.hull_lo = t;
      }
      region.hull_hi = t;
    }
  }
  return region;
}

ConfidenceRegion confidence_region2(const RegularizedEProcess& ereg, const Dataset& data,
                                    double alpha, const Grid2D& grid) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0,1)");
  grid.a.validate();
  grid.b.validate();
  ConfidenceRegion region;
  region.mask.assign(static_cast<size_t>(grid.size()), 0);
  double bound = -std::log(alpha);
  for (int ia = 0; ia < grid.a.nodes; ++ia) {
    for (int ib = 0; ib < grid.b.nodes; ++ib) {
      if (ereg.log_value2(data, grid.a.point(ia), grid.b.point(ib)) <= bound) {
        region.mask[static_cast<size_t>(grid.index(ia, ib))] = 1;
        region.empty = false;
      }
    }
  }
  return region;
}

CompositeTestResult composite_test(const RegularizedEProcess& ereg, const Dataset& data,
                                   int n, const std::vector<char>& hypothesis, double alpha,
                                   const Grid1D& grid) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0,1)");
  grid.validate();
  if (static_cast<int>(hypothesis.size()) != grid.nodes) {
    throw std::invalid_argument("hypothesis mask size does not match the grid");
  }
  CompositeTestResult result;
  double best = kInf;
  bool any = false;
  for (int i = 0; i < grid.nodes; ++i) {
    if (!hypothesis[static_cast<size_t>(i)]) continue;
    any = true;
    double lv = ereg.log_value(data, n, grid.point(i));
    if (lv < best) {
      best = lv;
      result.argmin_a = grid.point(i);
    }
  }
  if (!any) throw std::invalid_argument("empty hypothesis on grid");
  result.min_log_e = best;
  result.reject = best > -std::log(alpha);
  return result;
}

CompositeTestResult composite_test2(const RegularizedEProcess& ereg, const Dataset& data,
                                    const std::vector<char>& hypothesis, double alpha,
                                    const Grid2D& grid) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0,1)");
  grid.a.validate();
  grid.b.validate();
  if (hypothesis.size() != grid.size()) {
    throw std::invalid_argument("hypothesis mask size does not match the grid");
  }
  CompositeTestResult result;
  double best = kInf;
  bool any = false;
  for (int ia = 0; ia < grid.a.nodes; ++ia) {
    for (int ib = 0; ib < grid.b.nodes; ++ib) {
      if (!hypothesis[static_cast<size_t>(grid.index(ia, ib))]) continue;
      any = true;
      double lv = ereg.log_value2(data, grid.a.point(ia), grid.b.point(ib));
      if (lv < best) {
        best = lv;
        result.argmin_a = grid.a.point(ia);
        result.argmin_b = grid.b.point(ib);
      }
    }
  }
  if (!any) throw std::invalid_argument("empty hypothesis on grid");
  result.min_log_e = best;
  result.reject = best > -std::log(alpha);
  return result;
}

}  // namespace epim

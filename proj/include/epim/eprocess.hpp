#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "epim/grid.hpp"
#include "epim/regularization.hpp"

namespace epim {

struct WareCounts {
  double survivals_cmt = 0;
  double deaths_cmt = 0;
  double survivals_ecmo = 0;
  double deaths_ecmo = 0;
};

// Ordered 1D observations or two-arm success/failure counts. Prefix views
// are by index, so prefix(n) is stable under append.
struct Dataset {
  std::vector<double> obs;
  WareCounts counts;
  bool has_counts = false;

  static Dataset from_observations(std::vector<double> z);
  static Dataset from_counts(const WareCounts& c);
  void append(double z) { obs.push_back(z); }
  int size() const { return static_cast<int>(obs.size()); }
};

// An e-process family in log domain. e over the empty prefix is 1
// (log_e(..., 0, theta) == 0); +infinity is an explicit token.
struct EProcess {
  // 1D: log e_theta over the first n observations.
  std::function<double(const Dataset&, int, double)> log_e;
  // Full prefix path: entry k (k = 0..n_max) is log e_theta over the first
  // k observations. Shares work across prefixes.
  std::function<std::vector<double>(const Dataset&, int, double)> log_path;
  // 2D (two-arm counts): log e at (theta_cmt, theta_ecmo) over the counts.
  std::function<double(const Dataset&, double, double)> log_e2;
  bool is2d = false;
  std::string family;
};

// Product merge: log value = log rho(theta) + log e_theta(z^n).
struct RegularizedEProcess {
  EProcess base;
  Regularizer rho;
  double log_value(const Dataset& data, int n, double theta) const;
  double log_value2(const Dataset& data, double theta_cmt, double theta_ecmo) const;
  std::vector<double> log_value_path(const Dataset& data, int n_max, double theta) const;
};

RegularizedEProcess regularize(const EProcess& base, const Regularizer& rho);

// Gaussian mean model with unit observation variance: e_theta is the N(0,v)
// mixture likelihood over the likelihood at theta,
//   log e_theta(z^n) = -log(nv+1)/2 + (n/2)(theta - mean_n)^2
//                      - (n / (2(nv+1))) mean_n^2,
// which has expectation exactly 1 under P_theta at every n and is a mixture
// of likelihood-ratio martingales.
EProcess savage_dickey_gaussian(double v);

// Direct quadrature of the defining mixture integral
//   int N(mean | t, 1/n) N(t | 0, v) dt / N(mean | theta, 1/n)
// on [mean - 10 sqrt(v+1), mean + 10 sqrt(v+1)], used to cross-check the
// closed form. quad_nodes >= 10000 enforced.
double savage_dickey_quadrature_oracle(double v, const Dataset& data, int n, double theta,
                                       int quad_nodes);

// Two-arm binomial plug-in ratio with smoothing beta:
//   e_theta = prod_arm thetahat^s (1-thetahat)^d / theta^s (1-theta)^d,
//   thetahat = (s + beta) / (s + d + 2 beta),
// log domain with 0*log 0 = 0; a boundary theta against a positive opposing
// count gives +infinity.
EProcess ware_binomial(double survivals_cmt, double deaths_cmt, double survivals_ecmo,
                       double deaths_ecmo, double beta);

// Quasi-likelihood family for the median:
//   log e_theta(z^n) = -eta * sum_i (|z_i - m_{i-1}| - |z_i - theta|),
// m_k = sample median of the first k observations (even k: mean of the two
// middle order statistics), m_0 = theta_hat_0.
EProcess median_quasi_eprocess(double eta, double theta_hat_0);

// Largest eta for which the median family stays an e-process when the data
// density is bounded below by epsilon near the median: 2 * epsilon.
double eta_upper_bound(double epsilon);

enum class RuleKind { fixed, threshold, horizon };

struct StoppingRule {
  RuleKind kind = RuleKind::fixed;
  int n = 1;          // fixed
  double c = 0.0;     // threshold level
  int horizon = 1;    // threshold fallback / horizon
  std::string label() const;
  static StoppingRule make_fixed(int n);
  static StoppingRule make_threshold(double c, int horizon);
  static StoppingRule make_horizon(int n_max);
};

// Index (sample size, 1-based: epath[i] is the e-value after i+1
// observations) at which the rule stops. fixed(n) returns n (n = 0 is the
// empty prefix; n beyond the path errors); threshold(c, h) returns the first
// n with e >= c, else min(h, path length); horizon(N) returns N truncated to
// the path length.
int stop_index(const StoppingRule& rule, const std::vector<double>& epath);
// Same semantics on a log-scale path whose entry k is log e after k
// observations (entry 0 = empty prefix), as produced by log_value_path.
int stop_index_log(const StoppingRule& rule, const std::vector<double>& log_epath);

struct ConfidenceRegion {
  std::vector<char> mask;  // grid nodes with e^reg <= 1/alpha
  bool empty = true;
  double hull_lo = 0.0;  // 1D only: smallest/largest included node
  double hull_hi = 0.0;
};

ConfidenceRegion confidence_region(const RegularizedEProcess& ereg, const Dataset& data,
                                   int n, double alpha, const Grid1D& grid);
ConfidenceRegion confidence_region2(const RegularizedEProcess& ereg, const Dataset& data,
                                    double alpha, const Grid2D& grid);

struct CompositeTestResult {
  bool reject = false;
  double min_log_e = 0.0;  // min over the hypothesis of log e^reg
  double argmin_a = 0.0;   // minimizing node (1D: theta; 2D: theta_cmt)
  double argmin_b = 0.0;   // 2D: theta_ecmo
};

// Reject "Theta in H" iff min over the hypothesis nodes of e^reg > 1/alpha.
CompositeTestResult composite_test(const RegularizedEProcess& ereg, const Dataset& data,
                                   int n, const std::vector<char>& hypothesis, double alpha,
                                   const Grid1D& grid);
CompositeTestResult composite_test2(const RegularizedEProcess& ereg, const Dataset& data,
                                    const std::vector<char>& hypothesis, double alpha,
                                    const Grid2D& grid);

}  // namespace epim

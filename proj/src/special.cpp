#include "epim/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace epim {

namespace {

// Series: gamma_lower(a,z) = z^a e^-z sum_k z^k / (a (a+1) ... (a+k)).
double lower_gamma_series(double a, double z) {
  double term = 1.0 / a;
  double sum = term;
  for (int k = 1; k < 10000; ++k) {
    term *= z / (a + k);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return std::exp(a * std::log(z) - z) * sum;
}

// Continued fraction for the upper tail (modified Lentz).
double upper_gamma_cf(double a, double z) {
  const double tiny = 1e-300;
  double b = z + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(a * std::log(z) - z) * h;
}

}  // namespace

double lower_incomplete_gamma(double a, double z) {
  if (!(a > 0.0)) throw std::invalid_argument("lower_incomplete_gamma: a must be > 0");
  if (z < 0.0) throw std::invalid_argument("lower_incomplete_gamma: z must be >= 0");
  if (z == 0.0) return 0.0;
  if (z < a + 1.0) return lower_gamma_series(a, z);
  return std::tgamma(a) - upper_gamma_cf(a, z);
}

double regularized_gamma_p(double a, double z) {
  return lower_incomplete_gamma(a, z) / std::tgamma(a);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_pdf(double x) {
  static const double inv_sqrt_2pi = 0.3989422804014327;
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

double log_normal_pdf(double x, double mean, double var) {
  static const double log_2pi = 1.8378770664093453;
  double d = x - mean;
  return -0.5 * (log_2pi + std::log(var)) - 0.5 * d * d / var;
}

double chi_squared_1_cdf(double x) {
  if (x <= 0.0) return 0.0;
  return std::erf(std::sqrt(0.5 * x));
}

}  // namespace epim

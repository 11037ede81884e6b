#include "epim/calibration.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "epim/special.hpp"

namespace epim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Beyond z = -log u = 46 the regularized incomplete gamma is 1 to ~1e-18,
// so the asymptotic log form of gamma is exact there and the admissibility
// tail has the closed form Gamma(1+kappa) z^(-kappa).
constexpr double kZCut = 46.0;

}  // namespace

Calibrator beta_mixture_calibrator(double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be > 0");
  double a = 1.0 + kappa;
  double log_norm = std::log(kappa) + std::lgamma(a);  // log(kappa Gamma(1+kappa))
  auto log_gamma_u = [kappa, a, log_norm](double u) -> double {
    if (u >= 1.0) return std::log1p(kappa) - std::log(kappa);
    if (u <= 0.0) return -kInf;
    double z = -std::log(u);
    if (z > kZCut) return -z + a * std::log(z) - log_norm;
    // gamma(u) = u z^a / (kappa ig(z, a)) with ig the lower incomplete gamma.
    return -z + a * std::log(z) - std::log(kappa) - std::log(lower_incomplete_gamma(a, z));
  };
  Calibrator cal;
  cal.gamma = [log_gamma_u](double u) {
    double lg = log_gamma_u(u);
    return std::isinf(lg) && lg < 0.0 ? 0.0 : std::exp(lg);
  };
  cal.log_one_over_gamma = [log_gamma_u](double u) { return -log_gamma_u(u); };
  cal.tail_mass = [a, kappa](double z0) { return std::tgamma(a) * std::pow(z0, -kappa); };
  cal.upper_bound = (1.0 + kappa) / kappa;
  std::ostringstream name;
  name << "beta_mixture(kappa=" << kappa << ")";
  cal.name = name.str();
  return cal;
}

Calibrator beta_mixture_calibrator() { return beta_mixture_calibrator(1.0); }

Calibrator reciprocal_density_calibrator(const std::function<double(double)>& h,
                                         const std::string& name) {
  const int probe = 1001;
  double prev = kInf;
  for (int i = 0; i < probe; ++i) {
    double u = static_cast<double>(i) / (probe - 1);
    double d = h(u);
    if (!(d >= 0.0)) throw std::invalid_argument(name + ": density must be >= 0");
    if (d > prev * (1.0 + 1e-12) + 1e-15) {
      throw std::invalid_argument(name + ": density must be non-increasing");
    }
    prev = d;
  }
  Calibrator cal;
  cal.gamma = [h](double u) {
    double d = h(u);
    return d > 0.0 ? 1.0 / d : kInf;
  };
  cal.log_one_over_gamma = [h](double u) {
    double d = h(u);
    return d > 0.0 ? std::log(d) : -kInf;
  };
  cal.upper_bound = cal.gamma(1.0);
  cal.name = name;
  double residual = admissibility_residual(cal, 20001);
  if (!(residual < 1e-4)) {
    throw std::invalid_argument(name + ": admissibility residual " + std::to_string(residual));
  }
  return cal;
}

double admissibility_residual(const Calibrator& cal, int quad_nodes) {
  if (quad_nodes < 1001) throw std::invalid_argument("quad_nodes must be >= 1001");
  if (!cal.gamma && !cal.log_one_over_gamma) throw std::invalid_argument("calibrator lacks evaluator");
  // Substituting s = exp(-z) turns the integral over (0,1) of 1/gamma into
  // the integral over z > 0 of exp(-z)/gamma(exp(-z)); composite Simpson on
  // [0, z_cut] plus the calibrator's analytic tail handles the slowly
  // decaying mass near s = 0 that direct s-quadrature cannot reach.
  auto f = [&cal](double z) {
    double u = std::exp(-z);
    double log_inv = cal.log_one_over_gamma ? cal.log_one_over_gamma(u) : std::log(1.0 / cal.gamma(u));
    // log_inv = -inf (gamma infinite) gives 0; +inf (gamma hits 0 inside the
    // range) diverges, which the residual gate should see.
    return std::exp(-z + log_inv);
  };
  int intervals = quad_nodes - 1;
  if (intervals % 2 != 0) intervals += 1;
  double hstep = kZCut / intervals;
  double total = f(0.0) + f(kZCut);
  for (int i = 1; i < intervals; ++i) {
    total += f(i * hstep) * (i % 2 == 0 ? 2.0 : 4.0);
  }
  double integral = total * hstep / 3.0;
  if (cal.tail_mass) integral += cal.tail_mass(kZCut);
  return std::abs(integral - 1.0);
}

}  // namespace epim

#pragma once

#include <functional>
#include <string>

namespace epim {

// Admissible-to-calibrated contour transform. gamma: [0,1] -> [0, bound] is
// increasing with gamma(0) = 0 and integral over (0,1) of ds/gamma(s) <= 1.
// log_one_over_gamma keeps precision when gamma underflows: if gamma(u)
// rounds to zero the reciprocal is reported through its logarithm.
struct Calibrator {
  std::function<double(double)> gamma;
  std::function<double(double)> log_one_over_gamma;  // log(1/gamma(u))
  // Analytic tail of the admissibility integral: integral over z > z0 of
  // exp(-z)/gamma(exp(-z)) dz. Empty when no closed form is available.
  std::function<double(double)> tail_mass;
  double upper_bound = 0.0;  // sup of gamma on [0,1]
  std::string name;
};

// Beta-mixture calibrator with parameter kappa > 0 (default 1). With
// z = -log u it evaluates as
//   gamma_kappa(u) = (1 + kappa) / (kappa * T(z, 1 + kappa)),
//   T(z, a) = sum_{k>=0} z^k / ((a+1)(a+2)...(a+k)),
// a stable all-positive series; for z > 46 the asymptotic log form
//   log gamma = -z + (1+kappa) log z - log(kappa * Gamma(1+kappa))
// takes over. Increasing, gamma(0) = 0, gamma(1) = (1+kappa)/kappa,
// admissible with equality. tail_mass(z0) = Gamma(1+kappa) * z0^{-kappa}.
Calibrator beta_mixture_calibrator(double kappa);
Calibrator beta_mixture_calibrator();  // kappa = 1

// Calibrator built from a decreasing density h on (0,1) with integral 1:
// gamma(u) = u * h(u) ... validated variant; gates: h decreasing on a probe
// grid, integral of h within tol of 1. Throws std::invalid_argument on
// violation.
Calibrator reciprocal_density_calibrator(const std::function<double(double)>& h,
                                         const std::string& name);

// Numerical check of the admissibility identity integral_0^1 ds/gamma(s) = 1
// via the substitution s = exp(-z): integral_0^infty exp(-z)/gamma(exp(-z)) dz,
// Simpson on [0, z_cut] plus the calibrator's analytic tail. quad_nodes >= 1001
// enforced. Returns |integral - 1|.
double admissibility_residual(const Calibrator& cal, int quad_nodes);

}  // namespace epim

#pragma once

namespace epim {

// Lower incomplete gamma: integral of t^(a-1) e^(-t) dt over [0, z].
// Power series for z < a+1, continued fraction for z >= a+1; relative
// accuracy target 1e-10 over the parameter ranges used here (a <= ~50).
double lower_incomplete_gamma(double a, double z);

// Regularized form P(a, z) = lower_incomplete_gamma(a, z) / Gamma(a).
double regularized_gamma_p(double a, double z);

double normal_cdf(double x);
double normal_pdf(double x);
double log_normal_pdf(double x, double mean, double var);

// CDF of a chi-squared random variable with one degree of freedom.
double chi_squared_1_cdf(double x);

}  // namespace epim

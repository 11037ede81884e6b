#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "epim/calibration.hpp"
#include "epim/possibility.hpp"

namespace epim {

// Multiplicative regularizer rho(theta) = 1/gamma(q(theta)) stored in log
// form so rho = +infinity (gamma = 0) stays representable instead of being
// clamped. For the vacuous regularizer rho == 1.
struct Regularizer {
  std::function<double(double)> log_rho;
  std::function<double(double, double)> log_rho2;
  bool is2d = false;
  std::string provenance;
};

// Build rho from a prior contour and calibrator. Checks sup q on the grid is
// within 1e-6 of 1 and that the Choquet upper expectation of rho under q is
// <= 1 + 1e-3 (holds analytically; the check guards quadrature); throws
// std::invalid_argument otherwise.
Regularizer regularizer_from_contour(const Contour& prior, const Calibrator& cal);
Regularizer regularizer_from_contour(const Contour2D& prior, const Calibrator& cal);
Regularizer vacuous_regularizer();

// Center distribution for contamination / constant-odds models: either an
// explicit atom list (evaluated exactly) or a sampler (Monte Carlo).
struct CenterDistribution {
  std::vector<double> atoms;
  std::vector<double> weights;  // same length as atoms, sums to 1
  std::function<double(Rng&)> sampler;
  int mc_reps = 100000;
  std::uint64_t seed = 1;
};

enum class PriorModelKind { possibilistic, contamination, constant_odds, finite };

struct PriorModel {
  PriorModelKind kind = PriorModelKind::possibilistic;
  Contour contour;            // possibilistic
  CenterDistribution center;  // contamination, constant_odds
  double eps = 0.0;           // contamination weight, in (0,1)
  double tau = 0.0;           // constant-odds parameter, in (0,1)
  std::vector<double> atoms;          // finite
  std::vector<double> upper_masses;   // finite, sup Q({theta}) per atom
};

// Upper expected value of rho under the prior model.
//   possibilistic: Choquet integral of rho under the contour (grid nodes).
//   contamination: (1-eps) * E_center[rho] + eps * sup_grid rho.
//   constant_odds: the root x of
//       tau * E_center[(rho - x)+] + (1 - tau) * (E_center[rho] - x) = 0,
//     found by bisection on [0, sup_grid rho] to absolute tolerance 1e-8.
//   finite: sum over atoms of rho(atom) * upper_mass.
// Unbounded rho on the grid makes contamination/constant_odds return
// +infinity. Throws std::runtime_error if the bisection bracket has no sign
// change.
double upper_expectation_under(const PriorModel& model, const Regularizer& rho,
                               const Grid1D& grid);

// Discrete regularizer on indexed atoms: rho_i = eta_i / upper_mass_i
// (0 off-support). Requires sum(eta) <= 1 and positive upper mass wherever
// eta > 0.
std::vector<double> finite_support_regularizer(const std::vector<double>& eta,
                                               const std::vector<double>& upper_masses);

}  // namespace epim

#include "epim/regularization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace epim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_sup_normalized(const std::vector<double>& qv, const std::string& name) {
  double sup = *std::max_element(qv.begin(), qv.end());
  if (std::abs(sup - 1.0) > 1e-6) {
    throw std::invalid_argument(name + ": contour grid sup " + std::to_string(sup) +
                                " is not 1");
  }
}

void check_choquet_gate(const std::vector<double>& qv, const Calibrator& cal,
                        const std::string& name) {
  // Upper expectation of rho = 1/gamma(q) under the contour itself; bounded
  // by 1 analytically, the gate only guards grid evaluation.
  std::vector<double> rho(qv.size());
  for (size_t i = 0; i < qv.size(); ++i) {
    rho[i] = std::exp(cal.log_one_over_gamma(qv[i]));
  }
  double gate = choquet_upper_exact(qv, rho);
  if (!(gate <= 1.0 + 1e-3)) {
    throw std::invalid_argument(name + ": upper expectation gate failed, Choquet = " +
                                std::to_string(gate));
  }
}

// The center distribution is used as a finite measure: either its atom list,
// or one batch of Monte Carlo draws with equal weights. Materializing the
// draws keeps every bisection evaluation on the same empirical measure.
struct FiniteMeasure {
  std::vector<double> points;
  std::vector<double> weights;
};

FiniteMeasure materialize_center(const CenterDistribution& center) {
  FiniteMeasure m;
  if (!center.atoms.empty()) {
    if (center.atoms.size() != center.weights.size()) {
      throw std::invalid_argument("center atoms/weights size mismatch");
    }
    m.points = center.atoms;
    m.weights = center.weights;
    return m;
  }
  if (!center.sampler) throw std::invalid_argument("center distribution has no atoms or sampler");
  if (center.mc_reps < 1) throw std::invalid_argument("center mc_reps must be >= 1");
  Rng rng(center.seed);
  m.points.resize(static_cast<size_t>(center.mc_reps));
  m.weights.assign(static_cast<size_t>(center.mc_reps), 1.0 / center.mc_reps);
  for (auto& p : m.points) p = center.sampler(rng);
  return m;
}

}  // namespace

Regularizer regularizer_from_contour(const Contour& prior, const Calibrator& cal) {
  if (!cal.log_one_over_gamma) throw std::invalid_argument("calibrator lacks log evaluator");
  std::vector<double> qv = contour_values(prior);
  check_sup_normalized(qv, prior.name);
  check_choquet_gate(qv, cal, prior.name);
  Regularizer r;
  auto q = prior.q;
  auto loig = cal.log_one_over_gamma;
  r.log_rho = [q, loig](double t) { return loig(q(t)); };
  r.is2d = false;
  r.provenance = prior.name + " / " + cal.name;
  return r;
}

Regularizer regularizer_from_contour(const Contour2D& prior, const Calibrator& cal) {
  if (!cal.log_one_over_gamma) throw std::invalid_argument("calibrator lacks log evaluator");
  std::vector<double> qv = contour_values(prior);
  check_sup_normalized(qv, prior.name);
  check_choquet_gate(qv, cal, prior.name);
  Regularizer r;
  auto q = prior.q;
  auto loig = cal.log_one_over_gamma;
  r.log_rho2 = [q, loig](double ta, double tb) { return loig(q(ta, tb)); };
  r.is2d = true;
  r.provenance = prior.name + " / " + cal.name;
  return r;
}

Regularizer vacuous_regularizer() {
  Regularizer r;
  r.log_rho = [](double) { return 0.0; };
  r.log_rho2 = [](double, double) { return 0.0; };
  r.is2d = false;
  r.provenance = "vacuous";
  return r;
}

double upper_expectation_under(const PriorModel& model, const Regularizer& rho,
                               const Grid1D& grid) {
  if (!rho.log_rho) throw std::invalid_argument("regularizer lacks a 1D evaluator");
  auto rho_at = [&rho](double t) { return std::exp(rho.log_rho(t)); };

  switch (model.kind) {
    case PriorModelKind::possibilistic: {
      std::vector<double> qv = contour_values(model.contour);
      std::vector<double> rv(qv.size());
      for (int i = 0; i < model.contour.grid.nodes; ++i) {
        rv[static_cast<size_t>(i)] = rho_at(model.contour.grid.point(i));
      }
      return choquet_upper_exact(qv, rv);
    }
    case PriorModelKind::finite: {
      if (model.atoms.size() != model.upper_masses.size()) {
        throw std::invalid_argument("finite model atoms/upper_masses size mismatch");
      }
      double total = 0.0;
      for (size_t i = 0; i < model.atoms.size(); ++i) {
        total += rho_at(model.atoms[i]) * model.upper_masses[i];
      }
      return total;
    }
    case PriorModelKind::contamination:
    case PriorModelKind::constant_odds:
      break;
  }

  grid.validate();
  double sup_rho = 0.0;
  for (int i = 0; i < grid.nodes; ++i) sup_rho = std::max(sup_rho, rho_at(grid.point(i)));
  if (std::isinf(sup_rho)) return kInf;

  FiniteMeasure center = materialize_center(model.center);
  std::vector<double> rho_pts(center.points.size());
  double mean = 0.0;
  for (size_t i = 0; i < center.points.size(); ++i) {
    rho_pts[i] = rho_at(center.points[i]);
    if (std::isinf(rho_pts[i]) && center.weights[i] > 0.0) return kInf;
    mean += center.weights[i] * rho_pts[i];
    sup_rho = std::max(sup_rho, rho_pts[i]);
  }

  if (model.kind == PriorModelKind::contamination) {
    if (!(model.eps > 0.0 && model.eps < 1.0)) throw std::invalid_argument("eps must be in (0,1)");
    return (1.0 - model.eps) * mean + model.eps * sup_rho;
  }

  if (!(model.tau > 0.0 && model.tau < 1.0)) throw std::invalid_argument("tau must be in (0,1)");
  // Root of f(x) = tau E[(rho - x)+] + (1 - tau)(E[rho] - x), decreasing from
  // E[rho] at x = 0 to <= 0 at x = sup rho over the center support.
  auto f = [&](double x) {
    double plus = 0.0;
    for (size_t i = 0; i < rho_pts.size(); ++i) {
      plus += center.weights[i] * std::max(rho_pts[i] - x, 0.0);
    }
    return model.tau * plus + (1.0 - model.tau) * (mean - x);
  };
  double lo = 0.0, hi = sup_rho;
  double flo = f(lo), fhi = f(hi);
  if (flo < 0.0 || fhi > 0.0) {
    throw std::runtime_error("constant_odds bisection bracket has no sign change: f(0)=" +
                             std::to_string(flo) + " f(sup)=" + std::to_string(fhi));
  }
  while (hi - lo > 1e-8) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> finite_support_regularizer(const std::vector<double>& eta,
                                               const std::vector<double>& upper_masses) {
  if (eta.size() != upper_masses.size()) {
    throw std::invalid_argument("eta/upper_masses size mismatch");
  }
  double total = 0.0;
  for (double e : eta) {
    if (e < 0.0) throw std::invalid_argument("eta must be >= 0");
    total += e;
  }
  if (total > 1.0 + 1e-12) throw std::invalid_argument("eta must sum to at most 1");
  std::vector<double> rho(eta.size(), 0.0);
  for (size_t i = 0; i < eta.size(); ++i) {
    if (eta[i] > 0.0) {
      if (!(upper_masses[i] > 0.0)) {
        throw std::invalid_argument("zero upper mass on the support of eta");
      }
      rho[i] = eta[i] / upper_masses[i];
    }
  }
  return rho;
}

}  // namespace epim

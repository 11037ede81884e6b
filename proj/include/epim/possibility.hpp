#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "epim/grid.hpp"
#include "epim/rng.hpp"

namespace epim {

// Normalized possibility contour q: parameter space -> [0,1] with grid sup
// within 1e-9 of 1. The evaluator is callable anywhere; set operations use
// the domain grid nodes.
struct Contour {
  std::function<double(double)> q;
  Grid1D grid;
  std::string name;
};

struct Contour2D {
  std::function<double(double, double)> q;
  Grid2D grid;
  std::string name;
};

// One probability on the parameter space, described by its sampler.
struct PriorSampler {
  std::function<double(Rng&)> draw;
  std::string name;
};

std::vector<double> contour_values(const Contour& c);
std::vector<double> contour_values(const Contour2D& c);

// Contour backed by per-node values, evaluated anywhere by linear
// interpolation (clamped at the grid edges).
Contour contour_from_values(const Grid1D& grid, std::vector<double> values, std::string name);

// Grid-set helpers. Masks are indexed like the grid (row-major for 2D).
std::vector<char> mask_where(const Grid1D& g, const std::function<bool(double)>& pred);
std::vector<char> mask_where(const Grid2D& g, const std::function<bool(double, double)>& pred);

// Possibilistic upper probability: max of q over the hypothesis nodes.
// The conjugate lower probability of H is 1 - upper_probability(complement).
double upper_probability(const Contour& c, const std::vector<char>& hypothesis);
double upper_probability(const Contour2D& c, const std::vector<char>& hypothesis);

// Choquet upper expectation of g >= 0: integral over s in (0,1) of
// sup{g(theta) : q(theta) > s}, midpoint rule with s_nodes nodes. The
// supremum over an empty level set contributes 0. Infinite g on a node with
// positive contour yields +infinity (never silent saturation).
double choquet_upper_expectation(const Contour& c, const std::function<double(double)>& g,
                                 int s_nodes);

// Exact evaluation of the same s-integral: the integrand is a step function
// of s whose breakpoints are the grid contour values, so sorting the nodes
// by contour value and accumulating prefix maxima of g evaluates the
// integral with no quadrature error. Used wherever tolerance matters.
double choquet_upper_exact(const std::vector<double>& contour_vals,
                           const std::vector<double>& g_vals);
double choquet_upper_exact(const Contour& c, const std::function<double(double)>& g);

enum class Membership { member, non_member, inconclusive };

struct MembershipReport {
  Membership verdict = Membership::inconclusive;
  double worst_alpha = 0.0;   // alpha with the largest violation margin
  double worst_rate = 0.0;    // estimated Q{q(Theta) <= worst_alpha}
  double margin = 0.0;        // worst_rate - (worst_alpha + 3*stderr); > 0 means violation
};

// Monte Carlo check of Q{q(Theta) <= alpha} <= alpha across an alpha grid,
// with a 3-standard-error band.
MembershipReport credal_membership(const Contour& c, const PriorSampler& candidate,
                                   int alpha_nodes, int reps, std::uint64_t seed);

// Probability-to-possibility transform: psi(y) = P{density(Y) <= density(y)},
// estimated by Monte Carlo from the sampler, renormalized to grid sup 1.
Contour prob_to_possibility(const std::function<double(double)>& density,
                            const PriorSampler& sampler, int reps, std::uint64_t seed,
                            const Grid1D& grid);
// Exact variant: density_level_cdf(d) = P{density(Y) <= d}.
Contour prob_to_possibility_exact(const std::function<double(double)>& density,
                                  const std::function<double(double)>& density_level_cdf,
                                  const Grid1D& grid);

// Extension-principle marginal for delta = theta_e - theta_c: phi(delta) is
// the max of the 2D contour over nodes whose coordinate difference lies
// within half a delta-grid spacing of delta; renormalized. Deltas with an
// empty band are excluded (value 0) and listed in `excluded`.
struct MarginalResult {
  Contour phi;
  std::vector<int> excluded;
};
MarginalResult extension_marginal(const Contour2D& c2, const Grid1D& delta_grid);

enum class PriorKind { gaussian_surprise, mean_bound, event_bound, median_prior, vacuous };

PriorKind prior_kind_from_string(const std::string& s);
std::string prior_kind_to_string(PriorKind k);

// Named prior contours:
//   gaussian_surprise: q(t) = 1 - chi2_1_cdf(t^2 / K)
//   mean_bound:        q(t) = min(1, K / |t|)
//   event_bound:       q(t) = 1 if |t| <= 2K else K/5
//   median_prior:      q(t) = (0.05 if t < 0 else 1) / (1 + |t|)
//   vacuous:           q == 1  (K ignored)
Contour make_prior(PriorKind kind, double K, const Grid1D& grid);

// Ware joint prior: product of q_ecmo(t_e) = 0.1 + 0.9*[t_e >= 0.8] and
// q_cmt(t_c) = 0.5 + 0.5*[t_c <= 0.3] over (theta_cmt, theta_ecmo).
Contour2D make_ware_joint_prior(const Grid2D& grid);

}  // namespace epim

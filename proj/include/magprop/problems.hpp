#pragma once

#include "magprop/problem.hpp"

namespace magprop {
namespace problems {

/// Optional adjustments accepted by build_problem.
struct Overrides {
  std::optional<int> points;      // per-axis grid size
  std::optional<double> t_final;
  std::optional<int> knots;
};

/// Builds one of the bundled example problems:
///   ex1   double well x^4 - 15 x^2, asymmetric sine-lobe laser, eps = 1
///   ex2   shallow well x^4/5 - 2 x^2, chirped pulse, eps = 1e-2
///   ex3   2-D quartic four-well product potential, chirp/5 along x
///   ex4_1 3-D five-well product potential, chirp/5 along z
///   ex4_2 same wells, chirp/(5 sqrt 2) along (-1,0,1)
///   ex5   soft Coulomb well, sech-envelope laser, absorbing boundary
Problem build_problem(const std::string& name, const Overrides& ov = {});

/// Known built-in laser profiles, addressable from config files.
field::LaserField builtin_field(const std::string& name);

/// The sine-lobe profile: sin(25 pi t) on [0.6n, 0.6n+1/25],
/// sin(5 pi t) on (0.6n+1/25, 0.6n+6/25] for n >= 1, zero elsewhere.
double eval_e1(double t);
/// Chirped pulse 10 exp(-10(t-1)^2) sin(500 (t-1)^4 + 10).
double eval_e2(double t);
/// Sech envelope -0.01 sech((t-250)/85) cos(0.12 (t-250)).
double eval_e5(double t);

/// k-th lowest eigenpair (k = 0 is the ground state) of
/// H = -eps^2 D2 + diag(V) on a 1-D grid, dense solve. The eigenfunction is
/// normalized in the grid-weighted norm with its largest-magnitude entry
/// made real positive.
struct EigenPair {
  double value = 0.0;
  WaveFunction state;
};
EigenPair ground_and_excited_states(const GridPtr& grid,
                                    std::span<const double> v, double eps,
                                    int k);

/// P_j = dx^d sum_{|x - c_j| <= radius} |u(x)|^2 for each centre.
std::vector<double> well_occupation(const WaveFunction& u,
                                    std::span<const Vec> centres,
                                    double radius);

/// Pointwise damping step u <- exp(h/eps Gamma) u (the W-stage folding of
/// the absorbing potential, available standalone).
WaveFunction apply_absorber(const WaveFunction& u, const AbsorberSpec& spec,
                            double h, double eps);

/// Builds the flattened-potential absorber for a 1-D problem: inside the
/// band of `width` next to each edge, V and x are blended to their values at
/// the band's inner boundary with a C^2 ramp, and Gamma = -strength * ramp^2.
AbsorberSpec make_absorber(const GridPtr& grid, std::span<const double> v,
                           double width, double strength);

/// C^2 ramp used by the absorber (smoothstep of smoothstep), 0 -> 1 on [0,1].
double absorber_ramp(double s);

/// Sends a Gaussian packet of mean momentum kappa toward the absorbing band
/// on an otherwise free grid and returns the interior mass left after the
/// packet has had time to traverse, reflect or wrap. Used to calibrate and
/// regression-test the shipped damping strength.
double absorber_scan_residual(double gamma_strength, double kappa);

/// Shipped damping strength for the ex5 absorber.
double ex5_absorber_strength();

/// Grid-weighted position expectation along each axis.
Vec expectation_position(const WaveFunction& u);

/// Spectral per-axis gradient of sampled V (fallback when no analytic
/// gradient exists; Gibbs error near a non-periodic wrap is the caller's
/// concern).
std::array<std::vector<double>, 3> spectral_gradient(const GridPtr& grid,
                                                     std::span<const double> v);

}  // namespace problems
}  // namespace magprop

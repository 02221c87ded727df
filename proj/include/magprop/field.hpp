#pragma once

#include <functional>
#include <optional>

#include "magprop/quadrature.hpp"

namespace magprop {
namespace field {

/// Closed-form moments a field may supply to bypass quadrature: the Bernoulli
/// moments mu_0..mu_3 and the nested integral
///   I1(t,h) = int_0^h z e(t+z)^T int_0^z e(t+x) dx dz.
/// Essential for fields that are only piecewise smooth, where fixed-knot
/// quadrature across a kink or jump would dominate the error budget.
struct AnalyticMoments {
  std::function<Vec(int n, double t, double h)> mu;
  std::function<double(double t, double h)> I1;
};

/// Time-dependent laser field e(t) in R^d.
struct LaserField {
  int dims = 1;
  std::function<Vec(double t)> eval;
  std::optional<AnalyticMoments> analytic;

  Vec operator()(double t) const { return eval(t); }
};

/// mu_n(t,h) = int_0^h B~_n(h,z) e(t+z) dz, by the rule's knots (or the
/// field's analytic hook when present).
Vec mu(int n, const LaserField& field, double t, double h,
       const QuadratureRule& rule);

/// The per-step coefficient bundle of the simplified sixth-order expansion:
///   r = mu_0/h   (mean field; enters Vtilde = V0 + r.x)
///   s = 2 mu_1   (drift, O(h^3))
///   q = mu_2     (gradient weight, O(h^5))
///   p = mu_3/3   (commutator weight, O(h^5))
///   c = i/eps (2 I1 - E0.E1 - h/6 E0.E0)  (scalar phase rate)
/// plus the derived fields s~ = s - 12 h^-2 p and c~ = c - i/eps q.r.
struct MagnusCoefficients {
  double t = 0.0, h = 0.0, eps = 1.0;
  Vec r, s, q, p, s_tilde;
  Complex c{0.0, 0.0}, c_tilde{0.0, 0.0};
};

MagnusCoefficients magnus_coefficients(const LaserField& field, double t,
                                       double h, double eps,
                                       const QuadratureRule& rule);

// ---------------------------------------------------------------------------
// Piecewise-sinusoid profiles with exact moments.

/// e(tau) = amp * sin(omega*tau + phase) for tau in [t0, t1]; zero in gaps.
struct SinPiece {
  double t0 = 0.0, t1 = 0.0;
  double amp = 0.0, omega = 0.0, phase = 0.0;
};

/// Exact int_a^b tau^j sin(omega tau + phi) dtau for j = 0..4.
double poly_sin_integral(int j, double a, double b, double omega, double phi);

/// Analytic moments for a scalar piecewise-sinusoidal profile along a fixed
/// direction. pieces_in(a, b) must return the pieces overlapping [a, b],
/// clipped to it and ordered by time. Requires b >= a (the quadrature path
/// handles reversed windows).
AnalyticMoments piecewise_sin_moments(
    Vec direction, std::function<std::vector<SinPiece>(double, double)> pieces_in);

// ---------------------------------------------------------------------------
// Tabulated fields (control-application scenario: samples on an equispaced
// time grid, evaluated through piecewise Lagrange interpolation).

struct TabulatedField {
  double t0 = 0.0;
  double dt = 0.0;
  int dims = 1;
  std::vector<std::vector<double>> samples;  // samples[i] has dims entries
  int degree = 5;
};

LaserField tabulated_field(TabulatedField table);

/// Reads a (t, e) two-column or (t, e_1..e_d) multi-column text file with
/// equispaced t. '#' starts a comment.
TabulatedField load_field_table(const std::string& path, int degree);

}  // namespace field
}  // namespace magprop

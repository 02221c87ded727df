#pragma once

#include <vector>

#include "magprop/common.hpp"

namespace magprop {
namespace field {

/// Rescaled Bernoulli polynomial B~_n(h, zeta) = h^n B_n(zeta/h) for n <= 3.
/// These weight the laser moment integrals; every B~_n with n >= 1 integrates
/// to zero over [0, h].
double bernoulli_rescaled(int n, double h, double zeta);

/// Gauss-Legendre rule on [0, h] together with the nested weights
///   w~_ij = int_0^h l_i(z) int_0^z l_j(x) dx dz
/// for the Lagrange basis l_j on the knots (needed by the scalar phase
/// integral). A k-point rule integrates polynomials up to degree 2k-1
/// exactly; the nested weights are exact for the same reason since the
/// integrands are polynomials of degree 2k-1.
struct QuadratureRule {
  double h = 0.0;
  std::vector<double> knots;        // zeta_1..zeta_k in [0, h]
  std::vector<double> weights;      // sum = h
  std::vector<double> nested;       // k*k, row-major: nested[i*k + j] = w~_ij

  int size() const { return static_cast<int>(knots.size()); }
  double nested_at(int i, int j) const { return nested[i * size() + j]; }
};

QuadratureRule gauss_legendre(int k, double h);

/// Reference nodes/weights on [-1, 1] (Newton iteration on P_k).
void gauss_legendre_reference(int k, std::vector<double>& nodes,
                              std::vector<double>& weights);

}  // namespace field
}  // namespace magprop

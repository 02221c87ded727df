#include "magprop/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace magprop {
namespace field {

double bernoulli_rescaled(int n, double h, double zeta) {
  switch (n) {
    case 0: return 1.0;
    case 1: return zeta - 0.5 * h;
    case 2: return zeta * (zeta - h) + h * h / 6.0;
    case 3: return zeta * (zeta * (zeta - 1.5 * h) + 0.5 * h * h);
    default: throw SpecError("bernoulli_rescaled: n must be in 0..3");
  }
}

void gauss_legendre_reference(int k, std::vector<double>& nodes,
                              std::vector<double>& weights) {
  if (k < 1) throw SpecError("gauss_legendre: need k >= 1");
  nodes.assign(k, 0.0);
  weights.assign(k, 0.0);
  for (int i = 0; i < k; ++i) {
    // Chebyshev-like initial guess, then Newton on P_k.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (k + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      if (k == 1) p1 = x;
      for (int n = 2; n <= k; ++n) {
        const double p2 = ((2 * n - 1) * x * p1 - (n - 1) * p0) / n;
        p0 = p1;
        p1 = p2;
      }
      const double pk = (k == 1) ? x : p1;
      const double pk1 = (k == 1) ? 1.0 : p0;
      dp = k * (x * pk - pk1) / (x * x - 1.0);
      const double dx = pk / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  // Newton walked from +1 downward; store ascending.
  for (int i = 0; i < k / 2; ++i) {
    std::swap(nodes[i], nodes[k - 1 - i]);
    std::swap(weights[i], weights[k - 1 - i]);
  }
}

namespace {

// Lagrange basis value l_j(x) for the given knots.
double lagrange(const std::vector<double>& knots, int j, double x) {
  double v = 1.0;
  for (int m = 0; m < static_cast<int>(knots.size()); ++m) {
    if (m == j) continue;
    v *= (x - knots[m]) / (knots[j] - knots[m]);
  }
  return v;
}

// Generic nested weights: outer integral by a (k+4)-point rule (exact, the
// integrand is a polynomial of degree 2k-1), inner antiderivative of l_j by
// the same rule on [0, z]. Valid for signed h.
std::vector<double> nested_weights_numeric(const QuadratureRule& rule) {
  const int k = rule.size();
  std::vector<double> ref_x, ref_w;
  gauss_legendre_reference(k + 4, ref_x, ref_w);
  const double h = rule.h;

  auto inner = [&](int j, double z) {
    double s = 0.0;
    for (std::size_t q = 0; q < ref_x.size(); ++q) {
      const double xi = 0.5 * z * (ref_x[q] + 1.0);
      s += 0.5 * z * ref_w[q] * lagrange(rule.knots, j, xi);
    }
    return s;
  };

  std::vector<double> out(static_cast<std::size_t>(k) * k, 0.0);
  for (std::size_t q = 0; q < ref_x.size(); ++q) {
    const double z = 0.5 * h * (ref_x[q] + 1.0);
    const double wz = 0.5 * h * ref_w[q];
    for (int j = 0; j < k; ++j) {
      const double gj = inner(j, z);
      for (int i = 0; i < k; ++i)
        out[static_cast<std::size_t>(i) * k + j] += wz * lagrange(rule.knots, i, z) * gj;
    }
  }
  return out;
}

}  // namespace

QuadratureRule gauss_legendre(int k, double h) {
  QuadratureRule rule;
  rule.h = h;
  std::vector<double> x, w;
  gauss_legendre_reference(k, x, w);
  rule.knots.resize(k);
  rule.weights.resize(k);
  for (int i = 0; i < k; ++i) {
    rule.knots[i] = 0.5 * h * (x[i] + 1.0);
    rule.weights[i] = 0.5 * h * w[i];
  }

  if (k == 3 && h > 0.0) {
    // Closed forms for the three-knot rule.
    const double s15 = std::sqrt(15.0);
    const double f = h * h / 648.0;
    rule.nested = {25.0 * f,              (40.0 - 12.0 * s15) * f, (25.0 - 6.0 * s15) * f,
                   (40.0 + 12.0 * s15) * f, 64.0 * f,              (40.0 - 12.0 * s15) * f,
                   (25.0 + 6.0 * s15) * f,  (40.0 + 12.0 * s15) * f, 25.0 * f};
  } else {
    rule.nested = nested_weights_numeric(rule);
  }
  return rule;
}

}  // namespace field
}  // namespace magprop

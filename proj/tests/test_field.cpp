#include <doctest.h>

#include <numbers>
#include <random>

#include "magprop/field.hpp"
#include "support/oracles.hpp"

using namespace magprop;
using namespace magprop::field;
using oracles::adaptive_integral;
using oracles::adaptive_integral_vec;

namespace {
constexpr double kPi = std::numbers::pi;

LaserField constant_field(int dims, const Vec& e0) {
  LaserField f;
  f.dims = dims;
  f.eval = [e0](double) { return e0; };
  return f;
}

LaserField ramp_field() {
  LaserField f;
  f.dims = 1;
  f.eval = [](double t) {
    Vec e(1);
    e[0] = t;
    return e;
  };
  return f;
}
}  // namespace

TEST_CASE("rescaled Bernoulli polynomials") {
  const double h = 0.37;
  CHECK(bernoulli_rescaled(1, h, h / 2.0) == doctest::Approx(0.0));
  CHECK(bernoulli_rescaled(2, h, 0.0) == doctest::Approx(h * h / 6.0));
  CHECK_THROWS_AS(bernoulli_rescaled(4, h, 0.0), SpecError);
  CHECK_THROWS_AS(bernoulli_rescaled(-1, h, 0.0), SpecError);

  // int_0^h B~_n = 0 for n >= 1 (a 3-knot rule integrates them exactly).
  const auto rule = gauss_legendre(3, h);
  for (int n = 1; n <= 3; ++n) {
    double s = 0.0;
    for (int j = 0; j < 3; ++j)
      s += rule.weights[j] * bernoulli_rescaled(n, h, rule.knots[j]);
    CHECK(std::abs(s) <= 1e-15 * std::pow(h, n + 1));
  }
}

TEST_CASE("three-knot Gauss-Legendre closed forms") {
  const double h = 0.83;
  const auto rule = gauss_legendre(3, h);
  const double c = std::sqrt(3.0 / 5.0);
  CHECK(rule.weights[0] == doctest::Approx(h / 18.0 * 5.0).epsilon(1e-14));
  CHECK(rule.weights[1] == doctest::Approx(h / 18.0 * 8.0).epsilon(1e-14));
  CHECK(rule.weights[2] == doctest::Approx(h / 18.0 * 5.0).epsilon(1e-14));
  CHECK(rule.knots[0] == doctest::Approx(h / 2.0 * (1.0 - c)).epsilon(1e-14));
  CHECK(rule.knots[1] == doctest::Approx(h / 2.0).epsilon(1e-14));
  CHECK(rule.knots[2] == doctest::Approx(h / 2.0 * (1.0 + c)).epsilon(1e-14));

  const double s15 = std::sqrt(15.0);
  const double f = h * h / 648.0;
  const double expected[9] = {25.0 * f,
                              (40.0 - 12.0 * s15) * f,
                              (25.0 - 6.0 * s15) * f,
                              (40.0 + 12.0 * s15) * f,
                              64.0 * f,
                              (40.0 - 12.0 * s15) * f,
                              (25.0 + 6.0 * s15) * f,
                              (40.0 + 12.0 * s15) * f,
                              25.0 * f};
  for (int i = 0; i < 9; ++i)
    CHECK(std::abs(rule.nested[i] - expected[i]) <= 1e-13 * h * h);
}

TEST_CASE("one-knot rule is the midpoint rule") {
  const auto rule = gauss_legendre(1, 0.6);
  CHECK(rule.weights[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(rule.knots[0] == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("degree exactness of the three-knot rule") {
  const double h = 1.27;
  const auto rule = gauss_legendre(3, h);
  for (int deg = 0; deg <= 5; ++deg) {
    double s = 0.0;
    for (int j = 0; j < 3; ++j)
      s += rule.weights[j] * std::pow(rule.knots[j], deg);
    const double exact = std::pow(h, deg + 1) / (deg + 1);
    CHECK(std::abs(s - exact) <= 1e-13 * std::abs(exact));
  }
}

TEST_CASE("weights sum to h for several knot counts") {
  for (int k : {1, 2, 3, 5, 8, 11}) {
    const double h = 0.71;
    const auto rule = gauss_legendre(k, h);
    double s = 0.0;
    for (double w : rule.weights) s += w;
    CHECK(std::abs(s - h) <= 1e-14 * h);
  }
}

TEST_CASE("nested weights reproduce the Lagrange double integrals") {
  // Checked against adaptive integration for the closed-form k=3 matrix and
  // the numeric k=5 path alike.
  for (int k : {3, 5}) {
    const double h = 0.9;
    const auto rule = gauss_legendre(k, h);
    auto lagrange = [&](int j, double x) {
      double v = 1.0;
      for (int m = 0; m < k; ++m) {
        if (m == j) continue;
        v *= (x - rule.knots[m]) / (rule.knots[j] - rule.knots[m]);
      }
      return v;
    };
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        const double direct = adaptive_integral(
            [&](double z) {
              return lagrange(i, z) *
                     adaptive_integral([&](double x) { return lagrange(j, x); },
                                       0.0, z, 1e-14);
            },
            0.0, h, 1e-14);
        CHECK(std::abs(rule.nested_at(i, j) - direct) <= 1e-12);
      }
  }
}

TEST_CASE("mu of a constant field") {
  const double h = 0.45;
  const auto rule = gauss_legendre(3, h);
  const Vec e0{1.3, -0.2};
  const LaserField f = constant_field(2, e0);
  const Vec m0 = mu(0, f, 2.0, h, rule);
  CHECK(std::abs(m0[0] - h * e0[0]) <= 1e-15);
  CHECK(std::abs(m0[1] - h * e0[1]) <= 1e-15);
  for (int n = 1; n <= 3; ++n) {
    const Vec mn = mu(n, f, 2.0, h, rule);
    CHECK(mn.max_abs() <= 1e-14 * std::pow(h, n + 1) * e0.norm());
  }
}

TEST_CASE("mu of a linear ramp matches symbolic integration") {
  const auto rule = gauss_legendre(3, 1.0);
  // int_0^1 (z - 1/2) z dz = 1/12.
  const Vec m1 = mu(1, ramp_field(), 0.0, 1.0, rule);
  CHECK(m1[0] == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
}

TEST_CASE("quadrature mu agrees with adaptive integration for smooth fields") {
  std::mt19937 rng(123);
  const auto field_data = oracles::random_trig_field(2, rng);
  const LaserField f = field_data.as_field();
  const double t = 0.4, h = 0.1;
  const auto rule = gauss_legendre(3, h);
  for (int n = 0; n <= 3; ++n) {
    const Vec approx = mu(n, f, t, h, rule);
    const Vec exact = adaptive_integral_vec(
        [&](double z) {
          return bernoulli_rescaled(n, h, z) * field_data.value(t + z);
        },
        2, 0.0, h);
    CHECK((approx - exact).max_abs() <= 1e-10);
  }
}

TEST_CASE("constant field collapses the coefficient bundle") {
  const Vec e0{0.8, -1.1};
  const auto rule = gauss_legendre(3, 0.31);
  const auto k = magnus_coefficients(constant_field(2, e0), 1.7, 0.31, 0.5, rule);
  const double scale = 0.31 * e0.norm();
  CHECK((k.r - e0).max_abs() <= 1e-13 * e0.norm());
  CHECK(k.s.max_abs() <= 1e-13 * scale);
  CHECK(k.q.max_abs() <= 1e-13 * scale);
  CHECK(k.p.max_abs() <= 1e-13 * scale);
  CHECK(std::abs(k.c) <= 1e-13 * scale);
}

TEST_CASE("ramp field coefficient values") {
  // e(t) = t on [0,1]: r = 1/2, s = 1/6, q = 0, p = -1/360, c = -i/120.
  // The values are fixed by symbolic integration and cross-checked against
  // the adaptive oracle below.
  const auto rule = gauss_legendre(3, 1.0);
  const auto k = magnus_coefficients(ramp_field(), 0.0, 1.0, 1.0, rule);
  CHECK(k.r[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(k.s[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
  CHECK(std::abs(k.q[0]) <= 1e-14);
  CHECK(k.p[0] == doctest::Approx(-1.0 / 360.0).epsilon(1e-12));
  CHECK(k.c.real() == doctest::Approx(0.0));
  CHECK(k.c.imag() == doctest::Approx(-1.0 / 120.0).epsilon(1e-12));

  const double p_oracle =
      adaptive_integral(
          [&](double z) { return bernoulli_rescaled(3, 1.0, z) * z; }, 0.0, 1.0) /
      3.0;
  CHECK(k.p[0] == doctest::Approx(p_oracle).epsilon(1e-12));
}

TEST_CASE("derived bundle fields") {
  std::mt19937 rng(7);
  const auto data = oracles::random_trig_field(1, rng);
  const double t = 0.2, h = 0.23, eps = 0.4;
  const auto rule = gauss_legendre(3, h);
  const auto k = magnus_coefficients(data.as_field(), t, h, eps, rule);
  CHECK((k.s_tilde - (k.s - (12.0 / (h * h)) * k.p)).max_abs() == 0.0);
  CHECK(k.c_tilde == k.c - kImag / eps * k.q.dot(k.r));
}

TEST_CASE("h-scaling exponents of s, q, p for e = sin t") {
  LaserField f;
  f.dims = 1;
  f.eval = [](double t) {
    Vec e(1);
    e[0] = std::sin(t);
    return e;
  };
  std::vector<double> lh, ls, lq, lp;
  for (int k = 3; k <= 7; ++k) {
    const double h = std::pow(2.0, -k);
    const auto rule = gauss_legendre(3, h);
    const auto co = magnus_coefficients(f, 0.0, h, 1.0, rule);
    lh.push_back(std::log(h));
    ls.push_back(std::log(co.s.max_abs()));
    lq.push_back(std::log(co.q.max_abs()));
    lp.push_back(std::log(co.p.max_abs()));
  }
  auto slope = [&](const std::vector<double>& ly) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lh.size(); ++i) {
      sx += lh[i];
      sy += ly[i];
      sxx += lh[i] * lh[i];
      sxy += lh[i] * ly[i];
    }
    const double n = static_cast<double>(lh.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };
  CHECK(slope(ls) >= 2.9);
  CHECK(slope(lq) >= 4.9);
  CHECK(slope(lp) >= 4.9);
}

TEST_CASE("p equals the sum of its three defining integrals") {
  // Guards the misprinted integrand: mu_3/3 must reproduce the sum of the
  // three separately printed quadrature integrals
  //   p1 = 1/36 int (2z^3 - 3h^2 z + h^3) e
  //   p2 = 1/72 int (8z^3 - 9h z^2 + h^3) e
  //   p3 = 1/24 int (4z^3 - 9h z^2 + 6h^2 z - h^3) e
  std::mt19937 rng(31);
  for (int rep = 0; rep < 5; ++rep) {
    const auto data = oracles::random_trig_field(2, rng);
    const LaserField f = data.as_field();
    const double t = 0.1 * rep, h = 0.4;
    const auto rule = gauss_legendre(6, h);
    const auto k = magnus_coefficients(f, t, h, 1.0, rule);

    Vec p1(2), p2(2), p3(2);
    for (int j = 0; j < rule.size(); ++j) {
      const double z = rule.knots[j];
      const double w = rule.weights[j];
      const Vec e = f(t + z);
      p1 += (w / 36.0) * (2.0 * z * z * z - 3.0 * h * h * z + h * h * h) * e;
      p2 += (w / 72.0) * (8.0 * z * z * z - 9.0 * h * z * z + h * h * h) * e;
      p3 += (w / 24.0) *
            (4.0 * z * z * z - 9.0 * h * z * z + 6.0 * h * h * z - h * h * h) * e;
    }
    CHECK((k.p - (p1 + p2 + p3)).max_abs() <= 1e-12);

    const Vec p_exact = adaptive_integral_vec(
        [&](double z) {
          return (bernoulli_rescaled(3, h, z) / 3.0) * data.value(t + z);
        },
        2, 0.0, h);
    CHECK((k.p - p_exact).max_abs() <= 1e-11);
  }
}

TEST_CASE("scalar phase equals the two Appendix integrals") {
  // c31 and c32 are evaluated from their unsimplified triple/double-integral
  // definitions with the adaptive oracle (using the field's exact
  // antiderivative E) and summed; must match the consolidated c.
  std::mt19937 rng(2024);
  for (int rep = 0; rep < 20; ++rep) {
    const auto data = oracles::random_trig_field(1 + rep % 2, rng);
    const int d = data.dims;
    const double t = 0.3 * (rep % 3), h = 0.35, eps = 0.7;

    auto e_at = [&](double z) { return data.value(t + z); };
    auto E_at = [&](double z) {
      return data.antiderivative(t + z) - data.antiderivative(t);
    };

    const double I1 = adaptive_integral(
        [&](double z) { return z * e_at(z).dot(E_at(z)); }, 0.0, h);
    const double I2 = adaptive_integral(
        [&](double z) { return E_at(z).dot(E_at(z)); }, 0.0, h);
    const Complex c31 = kImag / eps * (I1 - I2) / 6.0;

    auto inner32 = [&](double zeta) {
      // int_0^zeta int_0^xi (e(chi) - e(xi)) dchi dxi = int_0^zeta (E(xi) -
      // xi e(xi)) dxi, componentwise.
      return adaptive_integral_vec(
          [&](double xi) { return E_at(xi) - xi * e_at(xi); }, d, 0.0, zeta,
          1e-14);
    };
    const double triple = adaptive_integral(
        [&](double zeta) { return e_at(zeta).dot(inner32(zeta)); }, 0.0, h,
        1e-13);
    const Complex c32 = 0.5 * kImag / eps * triple;

    const auto rule = gauss_legendre(8, h);
    const auto k = magnus_coefficients(data.as_field(), t, h, eps, rule);
    CHECK(std::abs(k.c - (c31 + c32)) <= 1e-12);
  }
}

TEST_CASE("piecewise-sin moments match adaptive integration across a jump") {
  // Two lobes of different frequency with a jump between them inside the
  // window; the analytic hook must reproduce the exact integrals where
  // fixed-knot quadrature cannot.
  auto pieces = [](double a, double b) {
    std::vector<SinPiece> out;
    const SinPiece lobes[2] = {{0.0, 0.3, 1.0, 25.0 * kPi, 0.0},
                               {0.3, 0.9, 1.0, 5.0 * kPi, 0.0}};
    for (const auto& p : lobes) {
      const double lo = std::max(a, p.t0), hi = std::min(b, p.t1);
      if (hi > lo) out.push_back({lo, hi, p.amp, p.omega, p.phase});
    }
    return out;
  };
  auto profile = [](double t) {
    if (t < 0.0 || t > 0.9) return 0.0;
    return t <= 0.3 ? std::sin(25.0 * kPi * t) : std::sin(5.0 * kPi * t);
  };
  const auto hook = piecewise_sin_moments(Vec{1.0}, pieces);

  const double t = 0.1, h = 0.45;  // spans the 25pi -> 5pi jump at 0.3
  for (int n = 0; n <= 3; ++n) {
    const double exact = adaptive_integral(
        [&](double z) { return bernoulli_rescaled(n, h, z) * profile(t + z); },
        0.0, 0.2 - t) /* up to the jump */
        ;
    // integrate piecewise to keep the oracle adaptive on smooth pieces
    const double exact2 = adaptive_integral(
        [&](double z) { return bernoulli_rescaled(n, h, z) * profile(t + z); },
        0.2 - t, h);
    const Vec got = hook.mu(n, t, h);
    CHECK(std::abs(got[0] - (exact + exact2)) <= 1e-13);
  }

  auto E_profile = [&](double z) {
    return adaptive_integral([&](double x) { return profile(t + x); }, 0.0, z,
                             1e-14);
  };
  const double i1_exact = adaptive_integral(
      [&](double z) { return z * profile(t + z) * E_profile(z); }, 0.0, 0.2 - t,
      1e-13) +
      adaptive_integral(
          [&](double z) { return z * profile(t + z) * E_profile(z); }, 0.2 - t,
          h, 1e-13);
  CHECK(std::abs(hook.I1(t, h) - i1_exact) <= 1e-11);
}

TEST_CASE("tabulated field interpolates a smooth pulse") {
  TabulatedField tab;
  tab.t0 = 0.0;
  tab.dt = 0.02;
  tab.dims = 1;
  tab.degree = 5;
  for (int i = 0; i <= 200; ++i)
    tab.samples.push_back({std::sin(1.7 * i * tab.dt)});
  const LaserField f = tabulated_field(tab);
  for (double t : {0.013, 0.5, 1.77, 3.99})
    CHECK(f(t)[0] == doctest::Approx(std::sin(1.7 * t)).epsilon(1e-9));
}

#include <doctest.h>

#include <numbers>
#include <random>

#include "magprop/magnus.hpp"
#include "support/oracles.hpp"

using namespace magprop;
using namespace magprop::magnus;
using spectral::make_grid_1d;
using spectral::sample;
using spectral::sample_real;

namespace {
constexpr double kPi = std::numbers::pi;

spectral::WaveFunction random_state(const spectral::GridPtr& grid, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist;
  spectral::WaveFunction u(grid);
  for (Complex& z : u.values) z = Complex{dist(rng), dist(rng)};
  return u;
}

// Dense assembly of Theta4 on a 1-D grid, mirroring its definition term by
// term with the dense derivative oracles.
Eigen::MatrixXcd dense_theta4(const MagnusOperator& op) {
  const int m = op.grid->points(0);
  const Eigen::MatrixXcd d1 = oracles::dense_d1(op.grid);
  const Eigen::MatrixXcd d2 = oracles::dense_d2(op.grid);
  const double h = op.coeffs.h, eps = op.eps;

  Eigen::MatrixXcd th = kImag * h * eps * d2 - op.coeffs.s[0] * d1;
  Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(m, m);
  for (int j = 0; j < m; ++j) {
    const double x = op.grid->coord(0, j);
    const double vt = (*op.v0)[j] + op.coeffs.r[0] * x;
    diag(j, j) = -kImag * h / eps * vt +
                 kImag / eps * op.coeffs.q[0] * (*op.grad_v0)[0][j] +
                 op.coeffs.c;
  }
  th += diag;

  Eigen::MatrixXcd fdiag = Eigen::MatrixXcd::Zero(m, m);
  for (int j = 0; j < m; ++j)
    fdiag(j, j) = op.coeffs.p[0] * (*op.grad_v0)[0][j];
  th += d2 * fdiag - fdiag * d2;
  return th;
}

struct TinySetup {
  spectral::GridPtr grid;
  std::vector<double> v0;
  std::array<std::vector<double>, 3> grad;
  field::MagnusCoefficients coeffs;
  MagnusOperator op;
};

// Random-but-reproducible smooth Theta4 data on an M-point grid.
TinySetup tiny_setup(int m, unsigned seed, double h = 0.05, double eps = 0.8) {
  TinySetup s;
  s.grid = make_grid_1d(-2.0, 2.0, m);
  const double L = 2.0;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const double a1 = dist(rng), a2 = dist(rng), b1 = dist(rng);
  s.v0 = sample_real(s.grid, [&](const Vec& x) {
    return a1 * std::cos(kPi * x[0] / L) + a2 * std::sin(2.0 * kPi * x[0] / L);
  });
  s.grad[0] = sample_real(s.grid, [&](const Vec& x) {
    return -a1 * kPi / L * std::sin(kPi * x[0] / L) +
           a2 * 2.0 * kPi / L * std::cos(2.0 * kPi * x[0] / L);
  });

  oracles::TrigField f = oracles::random_trig_field(1, rng);
  const auto rule = field::gauss_legendre(3, h);
  s.coeffs = field::magnus_coefficients(f.as_field(), b1, h, eps, rule);

  s.op.grid = s.grid;
  s.op.coeffs = s.coeffs;
  s.op.v0 = &s.v0;
  s.op.grad_v0 = &s.grad;
  s.op.eps = eps;
  return s;
}
}  // namespace

TEST_CASE("free Theta4 reduces to the kinetic symbol") {
  auto grid = make_grid_1d(-3.0, 3.0, 32);
  std::vector<double> v0(grid->size(), 0.0);
  std::array<std::vector<double>, 3> grad;
  grad[0].assign(grid->size(), 0.0);

  MagnusOperator op;
  op.grid = grid;
  op.v0 = &v0;
  op.grad_v0 = &grad;
  op.eps = 0.5;
  op.coeffs.h = 0.1;
  op.coeffs.r = Vec{0.0};
  op.coeffs.s = Vec{0.0};
  op.coeffs.q = Vec{0.0};
  op.coeffs.p = Vec{0.0};

  const int mode = 2;
  spectral::WaveFunction u = sample(grid, [&](const Vec& x) {
    return std::exp(Complex{0.0, kPi * mode * x[0] / 3.0});
  });
  const spectral::WaveFunction tu = apply_theta4(op, u);
  const Complex factor =
      kImag * op.coeffs.h * op.eps * -(kPi * mode / 3.0) * (kPi * mode / 3.0);
  for (std::size_t j = 0; j < u.values.size(); ++j)
    CHECK(std::abs(tu.values[j] - factor * u.values[j]) < 1e-12);
}

TEST_CASE("Theta4 matches its dense assembly on M=8") {
  const TinySetup s = tiny_setup(8, 42);
  const Eigen::MatrixXcd th = dense_theta4(s.op);
  const spectral::WaveFunction u = random_state(s.grid, 1);
  const spectral::WaveFunction got = apply_theta4(s.op, u);
  const Eigen::VectorXcd expect = th * oracles::to_eigen(u);
  for (int j = 0; j < 8; ++j) CHECK(std::abs(got.values[j] - expect(j)) < 1e-12);
}

TEST_CASE("Theta4 minus its scalar is skew-Hermitian on a tiny grid") {
  TinySetup s = tiny_setup(8, 87);
  s.op.coeffs.c = Complex{0.0, 0.0};
  const Eigen::MatrixXcd th = dense_theta4(s.op);
  const double denom = th.norm();
  CHECK((th + th.adjoint()).norm() <= 1e-10 * denom);
}

TEST_CASE("Theta4 is linear") {
  const TinySetup s = tiny_setup(16, 5);
  const spectral::WaveFunction u = random_state(s.grid, 2);
  const spectral::WaveFunction w = random_state(s.grid, 3);
  const Complex alpha{0.3, -1.1}, beta{-0.7, 0.2};

  spectral::WaveFunction mix(s.grid);
  for (std::size_t j = 0; j < mix.values.size(); ++j)
    mix.values[j] = alpha * u.values[j] + beta * w.values[j];
  const auto lhs = apply_theta4(s.op, mix);
  const auto tu = apply_theta4(s.op, u);
  const auto tw = apply_theta4(s.op, w);
  for (std::size_t j = 0; j < mix.values.size(); ++j)
    CHECK(std::abs(lhs.values[j] - (alpha * tu.values[j] + beta * tw.values[j])) <
          1e-12);
}

TEST_CASE("zero p kills the commutator contribution") {
  TinySetup s = tiny_setup(16, 11);
  s.op.coeffs.p = Vec{0.0};
  TinySetup s2 = tiny_setup(16, 11);
  s2.op.coeffs.p = Vec{0.0};
  // with p = 0 the operator must agree with the dense assembly that has no
  // commutator block
  const Eigen::MatrixXcd th = dense_theta4(s2.op);
  const spectral::WaveFunction u = random_state(s.grid, 8);
  const auto got = apply_theta4(s.op, u);
  const Eigen::VectorXcd expect = th * oracles::to_eigen(u);
  for (int j = 0; j < 16; ++j) CHECK(std::abs(got.values[j] - expect(j)) < 1e-12);
}

TEST_CASE("commutator matvec") {
  auto grid = make_grid_1d(-2.0, 2.0, 8);

  SUBCASE("constant profile commutes with the Laplacian") {
    std::vector<double> f(grid->size(), 3.7);
    const auto u = random_state(grid, 4);
    const auto out = commutator_matvec(grid, f, u);
    for (const Complex& z : out.values) CHECK(std::abs(z) < 1e-12);
  }

  SUBCASE("matches the dense commutator") {
    std::vector<double> f =
        sample_real(grid, [](const Vec& x) { return std::sin(kPi * x[0] / 2.0); });
    const Eigen::MatrixXcd d2 = oracles::dense_d2(grid);
    Eigen::MatrixXcd fd = Eigen::MatrixXcd::Zero(8, 8);
    for (int j = 0; j < 8; ++j) fd(j, j) = f[j];
    const Eigen::MatrixXcd comm = d2 * fd - fd * d2;
    const auto u = random_state(grid, 6);
    const auto got = commutator_matvec(grid, f, u);
    const Eigen::VectorXcd expect = comm * oracles::to_eigen(u);
    for (int j = 0; j < 8; ++j) CHECK(std::abs(got.values[j] - expect(j)) < 1e-12);
  }
}

TEST_CASE("commutator on trigonometric data matches the symbolic identity") {
  // For f = sin(pi x/L) and u = exp(i pi x/L), Lap(f u) - f Lap(u) =
  // f'' u + 2 f' u' with everything band-limited on the grid.
  const double L = 3.0;
  auto grid = make_grid_1d(-L, L, 64);
  const double w = kPi / L;
  std::vector<double> f =
      spectral::sample_real(grid, [&](const Vec& x) { return std::sin(w * x[0]); });
  auto u = sample(grid, [&](const Vec& x) {
    return std::exp(Complex{0.0, w * x[0]});
  });
  const auto got = commutator_matvec(grid, f, u);
  for (int j = 0; j < 64; ++j) {
    const double x = grid->coord(0, j);
    const Complex ux = std::exp(Complex{0.0, w * x});
    const Complex expect =
        (-w * w * std::sin(w * x)) * ux +
        2.0 * (w * std::cos(w * x)) * (kImag * w) * ux;
    CHECK(std::abs(got.values[j] - expect) < 1e-12);
  }
}

TEST_CASE("Lanczos with full dimension is exact") {
  auto grid = make_grid_1d(-2.0, 2.0, 8);
  std::vector<double> f =
      sample_real(grid, [](const Vec& x) { return 0.3 * std::cos(kPi * x[0] / 2.0); });
  MatVec mv = [&](const CVector& in, CVector& out) {
    spectral::WaveFunction tmp;
    tmp.grid = grid;
    tmp.values = in;
    out = commutator_matvec(grid, f, tmp).values;
  };
  const auto u = random_state(grid, 10);
  const auto got = lanczos_expm(mv, u, 8, Complex{1.0, 0.0});

  const Eigen::MatrixXcd d2 = oracles::dense_d2(grid);
  Eigen::MatrixXcd fd = Eigen::MatrixXcd::Zero(8, 8);
  for (int j = 0; j < 8; ++j) fd(j, j) = f[j];
  const Eigen::MatrixXcd a = d2 * fd - fd * d2;
  const Eigen::VectorXcd expect =
      oracles::dense_expm(a) * oracles::to_eigen(u);
  for (int j = 0; j < 8; ++j) CHECK(std::abs(got.values[j] - expect(j)) < 1e-10);
}

TEST_CASE("Lanczos on an eigenvector converges at m=1") {
  // The kinetic operator with a single Fourier mode: one Krylov vector spans
  // the invariant subspace and breakdown returns the exact answer.
  auto grid = make_grid_1d(-1.0, 1.0, 16);
  auto u = sample(grid, [](const Vec& x) {
    return std::exp(Complex{0.0, 2.0 * kPi * x[0]});
  });
  MatVec mv = [&](const CVector& in, CVector& out) {
    spectral::WaveFunction tmp;
    tmp.grid = grid;
    tmp.values = in;
    spectral::WaveFunction lap(grid);
    spectral::laplacian(tmp, lap);
    for (Complex& z : lap.values) z *= kImag;
    out = std::move(lap.values);
  };
  const auto got = lanczos_expm(mv, u, 1, Complex{1.0, 0.0});
  const double lam = -(2.0 * kPi) * (2.0 * kPi);
  const Complex factor = std::exp(kImag * lam);
  for (std::size_t j = 0; j < u.values.size(); ++j)
    CHECK(std::abs(got.values[j] - factor * u.values[j]) < 1e-12);
}

TEST_CASE("Lanczos keeps the norm for every m") {
  auto grid = make_grid_1d(-2.0, 2.0, 32);
  std::vector<double> f =
      sample_real(grid, [](const Vec& x) { return std::sin(kPi * x[0] / 2.0); });
  MatVec mv = [&](const CVector& in, CVector& out) {
    spectral::WaveFunction tmp;
    tmp.grid = grid;
    tmp.values = in;
    out = commutator_matvec(grid, f, tmp).values;
  };
  const auto u = random_state(grid, 15);
  for (int m : {1, 2, 4, 8, 16}) {
    const auto got = lanczos_expm(mv, u, m, Complex{1.0, 0.0});
    CHECK(std::abs(got.norm() - u.norm()) <= 1e-12 * u.norm());
  }
}

TEST_CASE("Lanczos error bound for a random skew-Hermitian matrix") {
  std::mt19937 rng(99);
  const int n = 200;
  const double norm_a = 10.0;
  const Eigen::MatrixXcd a = oracles::random_skew_hermitian(n, norm_a, rng);
  Eigen::VectorXcd v(n);
  std::normal_distribution<double> dist;
  for (int j = 0; j < n; ++j) v(j) = Complex{dist(rng), dist(rng)};
  v /= v.norm();

  const Eigen::VectorXcd exact = oracles::dense_expm(a) * v;
  MatVec mv = [&](const CVector& in, CVector& out) {
    Eigen::VectorXcd x(n);
    for (int j = 0; j < n; ++j) x(j) = in[j];
    const Eigen::VectorXcd y = a * x;
    out.resize(n);
    for (int j = 0; j < n; ++j) out[j] = y(j);
  };
  CVector vin(n);
  for (int j = 0; j < n; ++j) vin[j] = v(j);

  for (int m = 10; m <= 30; ++m) {
    CVector out;
    lanczos_expm(mv, vin, m, Complex{1.0, 0.0}, out);
    double err = 0.0;
    for (int j = 0; j < n; ++j) err += std::norm(out[j] - exact(j));
    err = std::sqrt(err);
    const double bound = 12.0 * std::exp(-norm_a * norm_a / (4.0 * m)) *
                         std::pow(std::numbers::e * norm_a / (2.0 * m), m);
    CHECK(err <= bound);
  }
}

TEST_CASE("adaptive Lanczos honors its tolerance") {
  auto grid = make_grid_1d(-2.0, 2.0, 48);
  std::vector<double> f =
      sample_real(grid, [](const Vec& x) { return 2.0 * std::sin(kPi * x[0] / 2.0); });
  MatVec mv = [&](const CVector& in, CVector& out) {
    spectral::WaveFunction tmp;
    tmp.grid = grid;
    tmp.values = in;
    out = commutator_matvec(grid, f, tmp).values;
  };
  const auto u = random_state(grid, 22);
  CVector out;
  lanczos_expm_adaptive(mv, u.values, Complex{0.5, 0.0}, out, 2, 1e-12);

  CVector ref;
  lanczos_expm(mv, u.values, 48, Complex{0.5, 0.0}, ref);
  double err = 0.0, scale = 0.0;
  for (std::size_t j = 0; j < out.size(); ++j) {
    err += std::norm(out[j] - ref[j]);
    scale += std::norm(u.values[j]);
  }
  CHECK(std::sqrt(err) <= 1e-10 * std::sqrt(scale));
}

TEST_CASE("theta4_lanczos_step against the dense step oracle") {
  const TinySetup s = tiny_setup(16, 63, 0.02, 1.0);
  const spectral::WaveFunction u = random_state(s.grid, 17);
  const auto got = theta4_lanczos_step(s.op, u, 16);
  const Eigen::MatrixXcd th = dense_theta4(s.op);
  const Eigen::VectorXcd expect = oracles::dense_expm(th) * oracles::to_eigen(u);
  for (int j = 0; j < 16; ++j)
    CHECK(std::abs(got.values[j] - expect(j)) < 1e-10);
}

TEST_CASE("commutator norm scales like h^5 on the Ex1 grid") {
  auto grid = make_grid_1d(-10.0, 10.0, 150);
  std::vector<double> grad = sample_real(
      grid, [](const Vec& x) { return 4.0 * x[0] * x[0] * x[0] - 30.0 * x[0]; });
  field::LaserField f;
  f.dims = 1;
  f.eval = [](double t) {
    Vec e(1);
    e[0] = std::sin(t);
    return e;
  };

  std::vector<double> lh, ln;
  for (int k = 3; k <= 7; ++k) {
    const double h = std::pow(2.0, -k);
    const auto rule = field::gauss_legendre(3, h);
    const auto co = field::magnus_coefficients(f, 0.0, h, 1.0, rule);
    std::vector<double> prof(grid->size());
    for (std::size_t j = 0; j < prof.size(); ++j) prof[j] = co.p[0] * grad[j];
    lh.push_back(std::log(h));
    ln.push_back(std::log(commutator_norm_estimate(grid, prof, 30)));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lh.size(); ++i) {
    sx += lh[i];
    sy += ln[i];
    sxx += lh[i] * lh[i];
    sxy += lh[i] * ln[i];
  }
  const double n = static_cast<double>(lh.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope >= 4.9);
}

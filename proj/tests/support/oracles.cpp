#include "support/oracles.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <numbers>

namespace oracles {

namespace {
constexpr double kPi = std::numbers::pi;
}

Eigen::MatrixXcd dense_d1(const GridPtr& grid) {
  const int m = grid->points(0);
  Eigen::MatrixXcd d(m, m);
  for (int j = 0; j < m; ++j)
    for (int l = 0; l < m; ++l) {
      Complex s{0.0, 0.0};
      for (int f = 0; f < m; ++f)
        s += grid->c1(0)[f] *
             std::exp(Complex{0.0, 2.0 * kPi * f * (j - l) / m});
      d(j, l) = s / static_cast<double>(m);
    }
  return d;
}

Eigen::MatrixXcd dense_d2(const GridPtr& grid) {
  const int m = grid->points(0);
  Eigen::MatrixXcd d(m, m);
  for (int j = 0; j < m; ++j)
    for (int l = 0; l < m; ++l) {
      Complex s{0.0, 0.0};
      for (int f = 0; f < m; ++f)
        s += grid->c2(0)[f] *
             std::exp(Complex{0.0, 2.0 * kPi * f * (j - l) / m});
      d(j, l) = s / static_cast<double>(m);
    }
  return d;
}

Eigen::MatrixXcd dense_expm(const Eigen::MatrixXcd& a) { return a.exp(); }

Eigen::VectorXcd to_eigen(const WaveFunction& u) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(u.values.size()));
  for (Eigen::Index j = 0; j < v.size(); ++j) v(j) = u.values[j];
  return v;
}

WaveFunction from_eigen(const GridPtr& grid, const Eigen::VectorXcd& v) {
  WaveFunction u(grid);
  for (Eigen::Index j = 0; j < v.size(); ++j) u.values[j] = v(j);
  return u;
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double b,
               double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double b,
                     double fa, double fm, double fb, double whole, double tol,
                     int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, m, fa, flm, fm);
  const double right = simpson(f, m, b, fm, frm, fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_integral(const std::function<double(double)>& f, double a,
                         double b, double tol, int max_depth) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = simpson(f, a, b, fa, fm, fb);
  return adaptive_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

Vec adaptive_integral_vec(const std::function<Vec(double)>& f, int dims,
                          double a, double b, double tol) {
  Vec out(dims);
  for (int d = 0; d < dims; ++d)
    out[d] = adaptive_integral([&](double t) { return f(t)[d]; }, a, b, tol);
  return out;
}

Vec TrigField::value(double t) const {
  Vec e(dims);
  for (int d = 0; d < dims; ++d) {
    double v = offset[d];
    for (const auto& term : terms[d])
      v += term.a * std::cos(term.w * t) + term.b * std::sin(term.w * t);
    e[d] = v;
  }
  return e;
}

Vec TrigField::antiderivative(double t) const {
  Vec e(dims);
  for (int d = 0; d < dims; ++d) {
    double v = offset[d] * t;
    for (const auto& term : terms[d])
      v += term.a / term.w * std::sin(term.w * t) -
           term.b / term.w * (std::cos(term.w * t) - 1.0);
    e[d] = v;
  }
  return e;
}

magprop::field::LaserField TrigField::as_field() const {
  magprop::field::LaserField f;
  f.dims = dims;
  f.eval = [self = *this](double t) { return self.value(t); };
  return f;
}

TrigField random_trig_field(int dims, std::mt19937& rng, int harmonics) {
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_real_distribution<double> freq(0.5, 3.0);
  TrigField f;
  f.dims = dims;
  f.offset.resize(dims);
  f.terms.resize(dims);
  for (int d = 0; d < dims; ++d) {
    f.offset[d] = amp(rng);
    for (int k = 0; k < harmonics; ++k)
      f.terms[d].push_back({amp(rng), amp(rng), freq(rng)});
  }
  return f;
}

Eigen::MatrixXcd random_skew_hermitian(int n, double target_norm,
                                       std::mt19937& rng) {
  std::normal_distribution<double> dist;
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex{dist(rng), dist(rng)};
  Eigen::MatrixXcd skew = 0.5 * (a - a.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Complex{0.0, -1.0} * skew);
  const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
  return (target_norm / norm) * skew;
}

}  // namespace oracles

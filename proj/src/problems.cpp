#include "magprop/problems.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

#include "magprop/scheme.hpp"
#include "magprop/stepper.hpp"

namespace magprop {
namespace problems {

using spectral::SpectralGrid;

namespace {
constexpr double kPi = std::numbers::pi;
}

double eval_e1(double t) {
  if (t < 0.6) return 0.0;
  const double n = std::floor(t / 0.6);
  const double phi = t - 0.6 * n;
  if (phi <= 0.04) return std::sin(25.0 * kPi * t);
  if (phi <= 0.24) return std::sin(5.0 * kPi * t);
  return 0.0;
}

double eval_e2(double t) {
  const double u = t - 1.0;
  return 10.0 * std::exp(-10.0 * u * u) * std::sin(500.0 * u * u * u * u + 10.0);
}

double eval_e5(double t) {
  const double u = (t - 250.0) / 85.0;
  return -0.01 / std::cosh(u) * std::cos(0.12 * (t - 250.0));
}

namespace {

// Sine-lobe pieces of e1 overlapping [a, b], clipped and ordered. The lobes
// for n >= 1 are [0.6n, 0.6n+0.04] at 25 pi and (0.6n+0.04, 0.6n+0.24] at
// 5 pi; the field vanishes in between.
std::vector<field::SinPiece> e1_pieces(double a, double b) {
  std::vector<field::SinPiece> out;
  if (b <= 0.6) return out;
  const long n_lo = std::max(1L, static_cast<long>(std::floor(a / 0.6)));
  const long n_hi = static_cast<long>(std::floor(b / 0.6)) + 1;
  for (long n = n_lo; n <= n_hi; ++n) {
    const double base = 0.6 * static_cast<double>(n);
    const double seg[3] = {base, base + 0.04, base + 0.24};
    const double omegas[2] = {25.0 * kPi, 5.0 * kPi};
    for (int s = 0; s < 2; ++s) {
      const double lo = std::max(a, seg[s]);
      const double hi = std::min(b, seg[s + 1]);
      if (hi > lo) out.push_back({lo, hi, 1.0, omegas[s], 0.0});
    }
  }
  return out;
}

field::LaserField make_e1_field() {
  field::LaserField f;
  f.dims = 1;
  f.eval = [](double t) {
    Vec e(1);
    e[0] = eval_e1(t);
    return e;
  };
  f.analytic = field::piecewise_sin_moments(Vec{1.0}, e1_pieces);
  return f;
}

field::LaserField scalar_field(std::function<double(double)> fn) {
  field::LaserField f;
  f.dims = 1;
  f.eval = [fn = std::move(fn)](double t) {
    Vec e(1);
    e[0] = fn(t);
    return e;
  };
  return f;
}

field::LaserField directed_field(Vec direction,
                                 std::function<double(double)> profile) {
  field::LaserField f;
  f.dims = direction.dims();
  f.eval = [direction, profile = std::move(profile)](double t) {
    return profile(t) * direction;
  };
  return f;
}

WaveFunction gaussian_initial(const GridPtr& grid, const Vec& centre,
                              double delta) {
  const int d = grid->dims();
  const double amp = std::pow(delta * kPi, -0.25 * d);
  WaveFunction u = spectral::sample(grid, [&](const Vec& x) {
    double r2 = 0.0;
    for (int a = 0; a < d; ++a) {
      const double dxa = x[a] - centre[a];
      r2 += dxa * dxa;
    }
    return Complex{amp * std::exp(-r2 / (2.0 * delta)), 0.0};
  });
  u.normalize();
  return u;
}

// Product-well potential  scale * prod_j |x - c_j|^2  and its gradient.
double product_well(const Vec& x, std::span<const Vec> centres, double scale) {
  double v = scale;
  for (const Vec& c : centres) {
    const Vec dxv = x - c;
    v *= dxv.dot(dxv);
  }
  return v;
}

double product_well_grad(const Vec& x, std::span<const Vec> centres,
                         double scale, int axis) {
  double g = 0.0;
  for (std::size_t j = 0; j < centres.size(); ++j) {
    double term = scale * 2.0 * (x[axis] - centres[j][axis]);
    for (std::size_t i = 0; i < centres.size(); ++i) {
      if (i == j) continue;
      const Vec dxv = x - centres[i];
      term *= dxv.dot(dxv);
    }
    g += term;
  }
  return g;
}

}  // namespace

field::LaserField builtin_field(const std::string& name) {
  if (name == "ex1_lobes") return make_e1_field();
  if (name == "ex2_chirp") return scalar_field(eval_e2);
  if (name == "ex3")
    return directed_field(Vec{1.0, 0.0}, [](double t) { return eval_e2(t) / 5.0; });
  if (name == "ex4_1")
    return directed_field(Vec{0.0, 0.0, 1.0},
                          [](double t) { return eval_e2(t) / 5.0; });
  if (name == "ex4_2")
    return directed_field(Vec{-1.0, 0.0, 1.0}, [](double t) {
      return eval_e2(t) / (5.0 * std::sqrt(2.0));
    });
  if (name == "ex5_sech") return scalar_field(eval_e5);
  throw SpecError("unknown built-in field '" + name + "'");
}

double absorber_ramp(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  auto smooth = [](double x) { return x * x * (3.0 - 2.0 * x); };
  return smooth(smooth(s));
}

AbsorberSpec make_absorber(const GridPtr& grid, std::span<const double> v,
                           double width, double strength) {
  if (grid->dims() != 1)
    throw SpecError("the flattened absorber is implemented for 1-D problems");
  AbsorberSpec spec;
  spec.width = width;
  const double hi = grid->hi(0);
  const double inner = hi - width;  // band is |x| in [inner, hi]

  // Flattening targets: the potential/coordinate values at the band's inner
  // edge on each side.
  auto v_at = [&](double x) {
    // v is sampled on the grid; the callers pass analytic samples, so pick
    // the nearest grid value (the edge lands on a grid point for our grids).
    const double pos = (x - grid->lo(0)) / grid->dx(0);
    const long i = std::lround(pos);
    return v[static_cast<std::size_t>(std::min<long>(
        std::max<long>(i, 0), static_cast<long>(grid->points(0)) - 1))];
  };
  const double v_right = v_at(inner);
  const double v_left = v_at(-inner);

  const int m = grid->points(0);
  spec.v_mod.resize(m);
  spec.x_mod[0].resize(m);
  spec.gamma.resize(m);
  for (int i = 0; i < m; ++i) {
    const double x = grid->coord(0, i);
    const double w = absorber_ramp((std::abs(x) - inner) / width);
    const double flat_v = (x >= 0.0) ? v_right : v_left;
    const double flat_x = (x >= 0.0) ? inner : -inner;
    spec.v_mod[i] = (1.0 - w) * v[i] + w * flat_v;
    spec.x_mod[0][i] = (1.0 - w) * x + w * flat_x;
    spec.gamma[i] = -strength * w * w;
  }
  return spec;
}

double ex5_absorber_strength() { return 0.35; }

Problem build_problem(const std::string& name, const Overrides& ov) {
  Problem pr;
  pr.name = name;

  auto finish_scalar_potential = [&](std::function<double(double)> v,
                                     std::function<double(double)> dv) {
    pr.v0 = spectral::sample_real(pr.grid, [&](const Vec& x) { return v(x[0]); });
    pr.grad_v0[0] =
        spectral::sample_real(pr.grid, [&](const Vec& x) { return dv(x[0]); });
    pr.grad_available = true;
  };

  if (name == "ex1") {
    pr.grid = spectral::make_grid_1d(-10.0, 10.0, ov.points.value_or(150));
    pr.eps = 1.0;
    pr.t_final = ov.t_final.value_or(4.0);
    pr.default_knots = ov.knots.value_or(3);
    finish_scalar_potential([](double x) { return x * x * (x * x - 15.0); },
                            [](double x) { return 4.0 * x * x * x - 30.0 * x; });
    pr.laser = make_e1_field();
    pr.make_initial = [](const Problem& p) {
      return gaussian_initial(p.grid, Vec{-2.5}, 0.2);
    };
  } else if (name == "ex2") {
    pr.grid = spectral::make_grid_1d(-5.0, 5.0, ov.points.value_or(1000));
    pr.eps = 1e-2;
    pr.t_final = ov.t_final.value_or(2.5);
    pr.default_knots = ov.knots.value_or(11);
    finish_scalar_potential(
        [](double x) { return x * x * (x * x / 5.0 - 2.0); },
        [](double x) { return 0.8 * x * x * x - 4.0 * x; });
    pr.laser = builtin_field("ex2_chirp");
    pr.make_initial = [](const Problem& p) {
      return gaussian_initial(p.grid, Vec{-2.5}, 1e-2);
    };
  } else if (name == "ex3" || name == "ex4_1" || name == "ex4_2") {
    const bool is3d = name != "ex3";
    const int d = is3d ? 3 : 2;
    pr.grid = spectral::make_grid_cube(d, -1.0, 1.0, ov.points.value_or(150));
    pr.eps = 1e-2;
    pr.t_final = ov.t_final.value_or(2.0);
    pr.default_knots = ov.knots.value_or(11);
    if (is3d)
      pr.centres = {Vec{-0.5, -0.5, -0.5}, Vec{-0.5, 0.5, -0.5},
                    Vec{0.75, 0.0, -0.5}, Vec{0.0, 0.0, 0.0},
                    Vec{0.0, 0.0, 0.75}};
    else
      pr.centres = {Vec{-0.5, -0.5}, Vec{-0.5, 0.5},
                    Vec{1.0 / std::sqrt(2.0), 0.0}, Vec{0.0, 0.0}};
    const double scale = is3d ? 40.0 : 2500.0;
    pr.v0 = spectral::sample_real(
        pr.grid, [&](const Vec& x) { return product_well(x, pr.centres, scale); });
    for (int a = 0; a < d; ++a)
      pr.grad_v0[a] = spectral::sample_real(pr.grid, [&](const Vec& x) {
        return product_well_grad(x, pr.centres, scale, a);
      });
    pr.grad_available = true;
    pr.laser = builtin_field(name == "ex3" ? "ex3" : (name == "ex4_1" ? "ex4_1" : "ex4_2"));
    pr.make_initial = [d](const Problem& p) {
      return gaussian_initial(p.grid, Vec(d), 1e-3);
    };
  } else if (name == "ex5") {
    pr.grid = spectral::make_grid_1d(-240.0, 240.0, ov.points.value_or(768));
    pr.eps = 1.0;
    pr.t_final = ov.t_final.value_or(500.0);
    pr.default_knots = ov.knots.value_or(3);
    finish_scalar_potential(
        [](double x) { return 2.0 * (1.0 - 1.0 / std::sqrt(x * x + 1.0)); },
        [](double x) {
          const double r = x * x + 1.0;
          return 2.0 * x / (r * std::sqrt(r));
        });
    pr.laser = builtin_field("ex5_sech");
    pr.absorber =
        make_absorber(pr.grid, pr.v0, 40.0, ex5_absorber_strength());
    pr.make_initial = [](const Problem& p) {
      return ground_and_excited_states(p.grid, p.v0, p.eps, 4).state;
    };
  } else {
    throw SpecError("unknown problem '" + name + "'");
  }
  return pr;
}

EigenPair ground_and_excited_states(const GridPtr& grid,
                                    std::span<const double> v, double eps,
                                    int k) {
  if (grid->dims() != 1)
    throw SpecError("the dense eigensolver handles 1-D problems");
  const int m = grid->points(0);
  if (k < 0 || k >= m) throw SpecError("eigenstate index out of range");

  // Circulant second-derivative matrix from its symbol: D2[i][j] = col[i-j].
  std::vector<double> col(m, 0.0);
  for (int n = 0; n < m; ++n) {
    double s = 0.0;
    for (int f = 0; f < m; ++f)
      s += grid->c2(0)[f] * std::cos(2.0 * kPi * f * n / m);
    col[n] = s / m;
  }
  Eigen::MatrixXd hmat(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) hmat(i, j) = -eps * eps * col[std::abs(i - j)];
  for (int i = 0; i < m; ++i) hmat(i, i) += v[i];

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hmat);
  if (es.info() != Eigen::Success)
    throw NumericError("eigensolver failed to converge");

  EigenPair out;
  out.value = es.eigenvalues()(k);
  out.state = WaveFunction(grid);
  Eigen::VectorXd vec = es.eigenvectors().col(k);
  int imax = 0;
  for (int i = 1; i < m; ++i)
    if (std::abs(vec(i)) > std::abs(vec(imax))) imax = i;
  if (vec(imax) < 0.0) vec = -vec;
  const double scale = 1.0 / std::sqrt(grid->dx(0));
  for (int i = 0; i < m; ++i) out.state.values[i] = scale * vec(i);
  out.state.normalize();
  return out;
}

std::vector<double> well_occupation(const WaveFunction& u,
                                    std::span<const Vec> centres,
                                    double radius) {
  if (radius <= 0.0) throw SpecError("well radius must be positive");
  const SpectralGrid& g = *u.grid;
  const int d = g.dims();
  std::vector<double> p(centres.size(), 0.0);
  std::array<int, 3> idx{0, 0, 0};
  std::size_t j = 0;
  const double r2 = radius * radius;
  for (;;) {
    const double w = std::norm(u.values[j]);
    for (std::size_t cj = 0; cj < centres.size(); ++cj) {
      double d2 = 0.0;
      for (int a = 0; a < d; ++a) {
        const double dxa = g.coord(a, idx[a]) - centres[cj][a];
        d2 += dxa * dxa;
      }
      if (d2 <= r2) p[cj] += w;
    }
    ++j;
    int a = 0;
    while (a < d && ++idx[a] == g.points(a)) idx[a++] = 0;
    if (a == d) break;
  }
  const double cell = g.cell_volume();
  for (double& x : p) x *= cell;
  return p;
}

WaveFunction apply_absorber(const WaveFunction& u, const AbsorberSpec& spec,
                            double h, double eps) {
  WaveFunction out = u;
  const double scale = h / eps;
  for (std::size_t j = 0; j < out.values.size(); ++j)
    out.values[j] *= std::exp(scale * spec.gamma[j]);
  return out;
}

double absorber_scan_residual(double gamma_strength, double kappa) {
  // Free packet aimed at the band; everything except Gamma switched off.
  Problem pr;
  pr.name = "absorber-scan";
  pr.grid = spectral::make_grid_1d(-240.0, 240.0, 768);
  pr.eps = 1.0;
  pr.v0.assign(pr.grid->size(), 0.0);
  pr.grad_v0[0].assign(pr.grid->size(), 0.0);
  pr.grad_available = true;
  pr.default_knots = 3;
  pr.laser = scalar_field([](double) { return 0.0; });
  pr.absorber = make_absorber(pr.grid, pr.v0, 40.0, gamma_strength);

  const double x0 = 120.0, sigma = 10.0;
  WaveFunction u = spectral::sample(pr.grid, [&](const Vec& x) {
    const double dxa = x[0] - x0;
    return std::exp(Complex{-dxa * dxa / (2.0 * sigma * sigma), kappa * x[0]});
  });
  u.normalize();

  const double v = 2.0 * kappa;  // group velocity of exp(i kappa x)
  const double t_total = 260.0 / v;
  const int steps = static_cast<int>(std::ceil(t_total / 0.2));
  const double h = t_total / steps;
  const auto scheme = splitting::parse_scheme("S3+OMF85");
  for (int n = 0; n < steps; ++n)
    u = splitting::step(u, pr, n * h, h, scheme);

  double interior = 0.0;
  for (int i = 0; i < pr.grid->points(0); ++i)
    if (std::abs(pr.grid->coord(0, i)) <= 190.0)
      interior += std::norm(u.values[i]);
  return interior * pr.grid->cell_volume();
}

Vec expectation_position(const WaveFunction& u) {
  const SpectralGrid& g = *u.grid;
  const int d = g.dims();
  Vec mean(d);
  std::array<int, 3> idx{0, 0, 0};
  std::size_t j = 0;
  for (;;) {
    const double w = std::norm(u.values[j]);
    for (int a = 0; a < d; ++a) mean[a] += w * g.coord(a, idx[a]);
    ++j;
    int a = 0;
    while (a < d && ++idx[a] == g.points(a)) idx[a++] = 0;
    if (a == d) break;
  }
  mean *= g.cell_volume();
  return mean;
}

std::array<std::vector<double>, 3> spectral_gradient(const GridPtr& grid,
                                                     std::span<const double> v) {
  std::array<std::vector<double>, 3> out;
  for (int a = 0; a < grid->dims(); ++a)
    out[a] = spectral::spectral_derivative(*grid, v, a);
  return out;
}

}  // namespace problems
}  // namespace magprop

#include "magprop/field.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

namespace magprop {
namespace field {

Vec mu(int n, const LaserField& field, double t, double h,
       const QuadratureRule& rule) {
  if (field.analytic && field.analytic->mu && h >= 0.0)
    return field.analytic->mu(n, t, h);
  Vec acc(field.dims);
  for (int j = 0; j < rule.size(); ++j) {
    const double z = rule.knots[j];
    acc += (rule.weights[j] * bernoulli_rescaled(n, h, z)) * field(t + z);
  }
  return acc;
}

MagnusCoefficients magnus_coefficients(const LaserField& field, double t,
                                       double h, double eps,
                                       const QuadratureRule& rule) {
  MagnusCoefficients k;
  k.t = t;
  k.h = h;
  k.eps = eps;

  Vec mu0, mu1, mu2, mu3, e1_moment;
  double i1 = 0.0;

  if (field.analytic && field.analytic->mu && field.analytic->I1 && h >= 0.0) {
    mu0 = field.analytic->mu(0, t, h);
    mu1 = field.analytic->mu(1, t, h);
    mu2 = field.analytic->mu(2, t, h);
    mu3 = field.analytic->mu(3, t, h);
    e1_moment = mu1 + (h / 2.0) * mu0;  // int z e(t+z) dz
    i1 = field.analytic->I1(t, h);
  } else {
    const int n = rule.size();
    std::vector<Vec> e(n);
    for (int j = 0; j < n; ++j) e[j] = field(t + rule.knots[j]);

    mu0 = Vec(field.dims);
    mu1 = Vec(field.dims);
    mu2 = Vec(field.dims);
    mu3 = Vec(field.dims);
    e1_moment = Vec(field.dims);
    for (int j = 0; j < n; ++j) {
      const double w = rule.weights[j];
      const double z = rule.knots[j];
      mu0 += w * e[j];
      mu1 += (w * bernoulli_rescaled(1, h, z)) * e[j];
      mu2 += (w * bernoulli_rescaled(2, h, z)) * e[j];
      mu3 += (w * bernoulli_rescaled(3, h, z)) * e[j];
      e1_moment += (w * z) * e[j];
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        i1 += rule.nested_at(i, j) * rule.knots[i] * e[i].dot(e[j]);
  }

  k.r = (1.0 / h) * mu0;
  k.s = 2.0 * mu1;
  k.q = mu2;
  k.p = (1.0 / 3.0) * mu3;
  k.s_tilde = k.s - (12.0 / (h * h)) * k.p;
  k.c = (kImag / eps) *
        (2.0 * i1 - mu0.dot(e1_moment) - (h / 6.0) * mu0.dot(mu0));
  k.c_tilde = k.c - (kImag / eps) * k.q.dot(k.r);
  return k;
}

// ---------------------------------------------------------------------------

double poly_sin_integral(int j, double a, double b, double omega, double phi) {
  // S_j = [-tau^j cos(omega tau + phi)/omega] + (j/omega) C_{j-1}
  // C_j = [ tau^j sin(omega tau + phi)/omega] - (j/omega) S_{j-1}
  if (j < 0) return 0.0;
  auto powj = [](double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
  };
  std::function<double(int, bool)> eval = [&](int n, bool sine) -> double {
    const double edge =
        sine ? (-(powj(b, n) * std::cos(omega * b + phi)) +
                (powj(a, n) * std::cos(omega * a + phi))) /
                   omega
             : ((powj(b, n) * std::sin(omega * b + phi)) -
                (powj(a, n) * std::sin(omega * a + phi))) /
                   omega;
    if (n == 0) return edge;
    return sine ? edge + (n / omega) * eval(n - 1, false)
                : edge - (n / omega) * eval(n - 1, true);
  };
  return eval(j, true);
}

namespace {

// int_a^b P(z) sin(omega z + phi) dz for a cubic P given by coefficients
// coef[0..3] in ascending powers.
double poly3_sin_integral(const std::array<double, 4>& coef, double a, double b,
                          double omega, double phi) {
  double s = 0.0;
  for (int j = 0; j < 4; ++j)
    if (coef[j] != 0.0) s += coef[j] * poly_sin_integral(j, a, b, omega, phi);
  return s;
}

std::array<double, 4> bernoulli_coeffs(int n, double h) {
  switch (n) {
    case 0: return {1.0, 0.0, 0.0, 0.0};
    case 1: return {-0.5 * h, 1.0, 0.0, 0.0};
    case 2: return {h * h / 6.0, -h, 1.0, 0.0};
    case 3: return {0.0, 0.5 * h * h, -1.5 * h, 1.0};
    default: throw SpecError("bernoulli_coeffs: n must be in 0..3");
  }
}

}  // namespace

AnalyticMoments piecewise_sin_moments(
    Vec direction,
    std::function<std::vector<SinPiece>(double, double)> pieces_in) {
  AnalyticMoments m;
  const double dir2 = direction.dot(direction);

  // Work in the step-local variable z = tau - t so the Bernoulli coefficients
  // keep their natural O(h^k) size; the piece oscillation absorbs the shift
  // into its phase.
  m.mu = [direction, pieces_in](int n, double t, double h) -> Vec {
    const auto pieces = pieces_in(t, t + h);
    const auto coef = bernoulli_coeffs(n, h);
    double total = 0.0;
    for (const auto& pc : pieces) {
      if (pc.amp == 0.0) continue;
      const double a = pc.t0 - t, b = pc.t1 - t;
      const double phi = pc.omega * t + pc.phase;
      total += pc.amp * poly3_sin_integral(coef, a, b, pc.omega, phi);
    }
    Vec out = direction;
    out *= total;
    return out;
  };

  m.I1 = [dir2, pieces_in](double t, double h) -> double {
    const auto pieces = pieces_in(t, t + h);
    double acc = 0.0;    // int_0^z profile up to the start of current piece
    double total = 0.0;
    for (const auto& pc : pieces) {
      const double a = pc.t0 - t, b = pc.t1 - t;
      const double phi = pc.omega * t + pc.phase;
      if (pc.amp != 0.0) {
        // E(z) = K - (amp/omega) cos(omega z + phi) inside the piece.
        const double K = acc + (pc.amp / pc.omega) * std::cos(pc.omega * a + phi);
        total += K * pc.amp * poly_sin_integral(1, a, b, pc.omega, phi);
        total -= (pc.amp * pc.amp / (2.0 * pc.omega)) *
                 poly_sin_integral(1, a, b, 2.0 * pc.omega, 2.0 * phi);
        acc = K - (pc.amp / pc.omega) * std::cos(pc.omega * b + phi);
      }
    }
    return dir2 * total;
  };

  return m;
}

// ---------------------------------------------------------------------------

LaserField tabulated_field(TabulatedField table) {
  if (table.samples.size() < static_cast<std::size_t>(table.degree + 1))
    throw SpecError("tabulated field needs at least degree+1 samples");
  if (table.dt <= 0.0) throw SpecError("tabulated field needs dt > 0");

  auto tab = std::make_shared<TabulatedField>(std::move(table));
  LaserField f;
  f.dims = tab->dims;
  f.eval = [tab](double t) -> Vec {
    const int n = static_cast<int>(tab->samples.size());
    const int win = tab->degree + 1;
    int first = static_cast<int>(std::floor((t - tab->t0) / tab->dt)) -
                tab->degree / 2;
    first = std::max(0, std::min(first, n - win));
    Vec out(tab->dims);
    for (int j = 0; j < win; ++j) {
      const int ij = first + j;
      double lj = 1.0;
      const double tj = tab->t0 + ij * tab->dt;
      for (int mI = 0; mI < win; ++mI) {
        if (mI == j) continue;
        const double tm = tab->t0 + (first + mI) * tab->dt;
        lj *= (t - tm) / (tj - tm);
      }
      for (int d = 0; d < tab->dims; ++d) out[d] += lj * tab->samples[ij][d];
    }
    return out;
  };
  return f;
}

TabulatedField load_field_table(const std::string& path, int degree) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open field table: " + path);
  TabulatedField t;
  t.degree = degree;
  std::vector<double> times;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    std::vector<double> vals;
    double x;
    while (row >> x) vals.push_back(x);
    if (vals.empty()) continue;
    if (vals.size() < 2) throw SpecError("field table rows need t and e columns");
    times.push_back(vals[0]);
    t.samples.emplace_back(vals.begin() + 1, vals.end());
  }
  if (times.size() < 2) throw SpecError("field table needs at least two rows");
  t.dims = static_cast<int>(t.samples.front().size());
  for (const auto& row : t.samples)
    if (static_cast<int>(row.size()) != t.dims)
      throw SpecError("field table rows have inconsistent column counts");
  t.t0 = times.front();
  t.dt = times[1] - times[0];
  for (std::size_t i = 1; i < times.size(); ++i)
    if (std::abs(times[i] - times[i - 1] - t.dt) > 1e-9 * std::abs(t.dt))
      throw SpecError("field table times must be equispaced");
  return t;
}

}  // namespace field
}  // namespace magprop

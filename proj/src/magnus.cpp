#include "magprop/magnus.hpp"

#include <Eigen/Dense>

#include <random>

namespace magprop {
namespace magnus {

using spectral::SpectralGrid;

std::vector<double> MagnusOperator::commutator_profile() const {
  if (!grad_v0) throw SpecError("Theta4 needs grad V0 samples");
  std::vector<double> f(grid->size(), 0.0);
  for (int a = 0; a < grid->dims(); ++a) {
    const auto& g = (*grad_v0)[a];
    if (g.size() != f.size()) throw SpecError("grad V0 samples missing");
    const double pa = coeffs.p[a];
    for (std::size_t j = 0; j < f.size(); ++j) f[j] += pa * g[j];
  }
  return f;
}

WaveFunction apply_theta4(const MagnusOperator& op, const WaveFunction& u,
                          bool include_scalar) {
  const SpectralGrid& g = *op.grid;
  if (!op.v0 || op.v0->size() != g.size())
    throw SpecError("Theta4 needs V0 samples on the grid");
  const double h = op.coeffs.h;
  const double eps = op.eps;
  const Complex ihe = kImag * h * eps;

  // Fourier part: sum over axes of (i h eps c2 - s_a c1).
  WaveFunction out(u.grid);
  CVector tmp, symbol;
  for (int a = 0; a < g.dims(); ++a) {
    tmp = u.values;
    const int n = g.points(a);
    symbol.resize(n);
    for (int k = 0; k < n; ++k)
      symbol[k] = ihe * g.c2(a)[k] - op.coeffs.s[a] * g.c1(a)[k];
    g.apply_axis_symbol(tmp, a, symbol);
    for (std::size_t j = 0; j < tmp.size(); ++j) out.values[j] += tmp[j];
  }

  // Pointwise part: -i h/eps (V0 + r.x) + i/eps q.(grad V0) (+ c).
  const Complex ihe_inv = kImag * h / eps;
  const Complex ie_inv = kImag / eps;
  const int d = g.dims();
  std::array<int, 3> idx{0, 0, 0};
  std::size_t j = 0;
  for (;;) {
    double vt = (*op.v0)[j];
    for (int a = 0; a < d; ++a) vt += op.coeffs.r[a] * g.coord(a, idx[a]);
    Complex w = -ihe_inv * vt;
    if (op.grad_v0) {
      double qg = 0.0;
      for (int a = 0; a < d; ++a) qg += op.coeffs.q[a] * (*op.grad_v0)[a][j];
      w += ie_inv * qg;
    } else if (op.coeffs.q.norm() != 0.0) {
      throw SpecError("Theta4 needs grad V0 samples");
    }
    if (include_scalar) w += op.coeffs.c;
    out.values[j] += w * u.values[j];
    ++j;
    int a = 0;
    while (a < d && ++idx[a] == g.points(a)) idx[a++] = 0;
    if (a == d) break;
  }

  // Commutator part [Lap, p.(grad V0)].
  if (op.coeffs.p.max_abs() != 0.0) {
    const auto f = op.commutator_profile();
    WaveFunction comm = commutator_matvec(op.grid, f, u);
    for (std::size_t i = 0; i < out.values.size(); ++i)
      out.values[i] += comm.values[i];
  }
  return out;
}

WaveFunction commutator_matvec(const GridPtr& grid, std::span<const double> f,
                               const WaveFunction& u) {
  if (f.size() != grid->size()) throw SpecError("profile does not match grid");
  WaveFunction fu(grid);
  for (std::size_t j = 0; j < f.size(); ++j) fu.values[j] = f[j] * u.values[j];

  WaveFunction lap_fu(grid), lap_u(grid);
  spectral::laplacian(fu, lap_fu);
  spectral::laplacian(u, lap_u);

  WaveFunction out(grid);
  for (std::size_t j = 0; j < f.size(); ++j)
    out.values[j] = lap_fu.values[j] - f[j] * lap_u.values[j];
  return out;
}

namespace {

double vec_norm(const CVector& v) {
  double s = 0.0;
  for (const Complex& z : v) s += std::norm(z);
  return std::sqrt(s);
}

Complex vec_dot(const CVector& a, const CVector& b) {
  Complex s{0.0, 0.0};
  for (std::size_t j = 0; j < a.size(); ++j) s += std::conj(a[j]) * b[j];
  return s;
}

// Extends the Lanczos factorization in `ws` up to m vectors. Returns the
// number of usable iterations (may stop early on breakdown).
int extend_lanczos(const MatVec& matvec, const CVector& v, int m,
                   LanczosWorkspace& ws, bool& breakdown, double breakdown_tol) {
  const std::size_t n = v.size();
  if (ws.basis.empty()) {
    const double b0 = vec_norm(v);
    if (b0 == 0.0) throw NumericError("Lanczos on the zero vector");
    ws.basis.push_back(v);
    for (Complex& z : ws.basis[0]) z /= b0;
  }
  CVector w(n);
  breakdown = false;
  while (static_cast<int>(ws.alpha.size()) < m) {
    const int j = static_cast<int>(ws.alpha.size());
    matvec(ws.basis[j], w);
    const Complex aj = vec_dot(ws.basis[j], w);
    for (std::size_t i = 0; i < n; ++i) w[i] -= aj * ws.basis[j][i];
    if (j > 0) {
      // Skew-Hermitian tridiagonal: the (j-1, j) entry is -beta_{j-1}.
      const double bprev = ws.beta[j - 1];
      for (std::size_t i = 0; i < n; ++i) w[i] += bprev * ws.basis[j - 1][i];
    }
    // Full re-orthogonalization once drift exceeds the threshold.
    const double wn = vec_norm(w);
    double worst = 0.0;
    std::vector<Complex> coeff(ws.basis.size());
    for (std::size_t i = 0; i < ws.basis.size(); ++i) {
      coeff[i] = vec_dot(ws.basis[i], w);
      worst = std::max(worst, std::abs(coeff[i]));
    }
    if (wn > 0.0 && worst > 1e-8 * wn) {
      for (std::size_t i = 0; i < ws.basis.size(); ++i)
        for (std::size_t l = 0; l < n; ++l) w[l] -= coeff[i] * ws.basis[i][l];
    }
    const double bj = vec_norm(w);
    ws.alpha.push_back(aj);
    if (bj <= breakdown_tol) {
      breakdown = true;
      return j + 1;
    }
    ws.beta.push_back(bj);
    ws.basis.push_back(w);
    for (Complex& z : ws.basis.back()) z /= bj;
  }
  return m;
}

// y = exp(dt_scale * H_m) e1 * ||v|| for the skew-Hermitian tridiagonal in ws.
Eigen::VectorXcd small_exponential(const LanczosWorkspace& ws, int m,
                                   Complex dt_scale, double v_norm) {
  Eigen::MatrixXcd herm = Eigen::MatrixXcd::Zero(m, m);  // -i H_m
  for (int j = 0; j < m; ++j) {
    herm(j, j) = -kImag * ws.alpha[j];
    if (j + 1 < m) {
      herm(j + 1, j) = -kImag * ws.beta[j];
      herm(j, j + 1) = kImag * ws.beta[j];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
  if (es.info() != Eigen::Success)
    throw NumericError("Lanczos small-matrix eigensolve failed");
  Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(m);
  e1(0) = v_norm;
  Eigen::VectorXcd z = es.eigenvectors().adjoint() * e1;
  for (int j = 0; j < m; ++j)
    z(j) *= std::exp(dt_scale * kImag * es.eigenvalues()(j));
  return es.eigenvectors() * z;
}

void assemble(const LanczosWorkspace& ws, const Eigen::VectorXcd& y,
              CVector& out) {
  const std::size_t n = ws.basis[0].size();
  out.assign(n, Complex{0.0, 0.0});
  for (int j = 0; j < y.size(); ++j) {
    const Complex yj = y(j);
    const CVector& bj = ws.basis[j];
    for (std::size_t i = 0; i < n; ++i) out[i] += yj * bj[i];
  }
}

}  // namespace

LanczosResult lanczos_expm(const MatVec& matvec, const CVector& v, int m,
                           Complex dt_scale, CVector& out,
                           LanczosWorkspace* workspace) {
  if (m < 1) throw SpecError("Lanczos needs m >= 1");
  LanczosWorkspace local;
  LanczosWorkspace& ws = workspace ? *workspace : local;
  const double v_norm = vec_norm(v);
  bool breakdown = false;
  const double breakdown_tol = 1e-14 * std::max(v_norm, 1.0);
  const int used = extend_lanczos(matvec, v, m, ws, breakdown, breakdown_tol);
  const Eigen::VectorXcd y = small_exponential(ws, used, dt_scale, v_norm);
  assemble(ws, y, out);

  LanczosResult res;
  res.iterations = used;
  res.breakdown = breakdown;
  if (used > 1) {
    const Eigen::VectorXcd y_prev =
        small_exponential(ws, used - 1, dt_scale, v_norm);
    Eigen::VectorXcd diff = y;
    diff.head(used - 1) -= y_prev;
    res.last_correction = diff.norm();
  } else {
    res.last_correction = 0.0;
  }
  return res;
}

WaveFunction lanczos_expm(const MatVec& matvec, const WaveFunction& v, int m,
                          Complex dt_scale) {
  WaveFunction out(v.grid);
  lanczos_expm(matvec, v.values, m, dt_scale, out.values, nullptr);
  return out;
}

int lanczos_expm_adaptive(const MatVec& matvec, const CVector& v,
                          Complex dt_scale, CVector& out, int m_start,
                          double tol, int m_cap) {
  LanczosWorkspace ws;
  ws.m_max = m_cap;
  const double v_norm = vec_norm(v);
  int m = std::max(1, m_start);
  for (;;) {
    const LanczosResult res = lanczos_expm(matvec, v, m, dt_scale, out, &ws);
    if (res.breakdown || res.last_correction <= tol * v_norm ||
        res.iterations < m)
      return res.iterations;
    if (m >= m_cap)
      throw NumericError("Lanczos failed to converge within the iteration cap");
    m = std::min(2 * m, m_cap);
  }
}

WaveFunction theta4_lanczos_step(const MagnusOperator& op,
                                 const WaveFunction& u, int m) {
  MatVec mv = [&op, &u](const CVector& in, CVector& out_v) {
    WaveFunction tmp;
    tmp.grid = u.grid;
    tmp.values = in;
    WaveFunction r = apply_theta4(op, tmp, /*include_scalar=*/false);
    out_v = std::move(r.values);
  };
  WaveFunction out(u.grid);
  lanczos_expm(mv, u.values, m, Complex{1.0, 0.0}, out.values, nullptr);
  const Complex phase = std::exp(op.coeffs.c);
  for (Complex& z : out.values) z *= phase;
  return out;
}

WaveFunction theta4_lanczos_step_adaptive(const MagnusOperator& op,
                                          const WaveFunction& u, double tol,
                                          int m_cap) {
  MatVec mv = [&op, &u](const CVector& in, CVector& out_v) {
    WaveFunction tmp;
    tmp.grid = u.grid;
    tmp.values = in;
    WaveFunction r = apply_theta4(op, tmp, /*include_scalar=*/false);
    out_v = std::move(r.values);
  };
  WaveFunction out(u.grid);
  lanczos_expm_adaptive(mv, u.values, Complex{1.0, 0.0}, out.values, 4, tol,
                        m_cap);
  const Complex phase = std::exp(op.coeffs.c);
  for (Complex& z : out.values) z *= phase;
  return out;
}

double commutator_norm_estimate(const GridPtr& grid, std::span<const double> f,
                                int iterations) {
  std::mt19937 rng(0x5eed);
  std::normal_distribution<double> dist;
  WaveFunction v(grid);
  for (Complex& z : v.values) z = Complex{dist(rng), dist(rng)};
  const double n0 = vec_norm(v.values);
  for (Complex& z : v.values) z /= n0;

  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    // One application of -C1^2 = C1^dagger C1 (C1 is skew-Hermitian).
    WaveFunction w = commutator_matvec(grid, f, v);
    WaveFunction w2 = commutator_matvec(grid, f, w);
    for (Complex& z : w2.values) z = -z;
    lambda = vec_norm(w2.values);
    if (lambda == 0.0) return 0.0;
    for (std::size_t j = 0; j < v.values.size(); ++j)
      v.values[j] = w2.values[j] / lambda;
  }
  return std::sqrt(lambda);
}

}  // namespace magnus
}  // namespace magprop

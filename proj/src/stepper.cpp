#include "magprop/stepper.hpp"

namespace magprop {
namespace splitting {

using field::MagnusCoefficients;
using spectral::SpectralGrid;

namespace {

// Visits grid points in flat order, handing the per-axis indices along.
template <typename F>
void for_each_point(const SpectralGrid& g, F&& f) {
  const int d = g.dims();
  std::array<int, 3> idx{0, 0, 0};
  std::size_t j = 0;
  for (;;) {
    f(j, idx);
    ++j;
    int a = 0;
    while (a < d && ++idx[a] == g.points(a)) idx[a++] = 0;
    if (a == d) break;
  }
}

// -i h/eps (Veff + r.xeff) + i/eps q.(grad V0) + scalar + h/eps Gamma.
CVector modified_potential_phase(const Problem& pr,
                                 const MagnusCoefficients& k, Complex scalar,
                                 bool with_gradient_term) {
  const SpectralGrid& g = *pr.grid;
  const int d = g.dims();
  const auto& veff = pr.effective_v();
  const std::vector<double>* gamma = pr.damping();
  if (with_gradient_term && k.q.max_abs() != 0.0 && !pr.grad_available)
    throw SpecError("scheme needs grad V0 but problem '" + pr.name +
                    "' does not provide it");

  std::array<const std::vector<double>*, 3> xs{};
  for (int a = 0; a < d; ++a) xs[a] = &pr.effective_x(a);

  const Complex m_ihe = -kImag * k.h / pr.eps;
  const Complex ie = kImag / pr.eps;
  const double damp_scale = k.h / pr.eps;

  CVector phase(g.size());
  const bool use_grad = with_gradient_term && pr.grad_available &&
                        k.q.max_abs() != 0.0;
  for_each_point(g, [&](std::size_t j, const std::array<int, 3>& idx) {
    double vt = veff[j];
    for (int a = 0; a < d; ++a) vt += k.r[a] * (*xs[a])[idx[a]];
    Complex w = m_ihe * vt + scalar;
    if (use_grad) {
      double qg = 0.0;
      for (int a = 0; a < d; ++a) qg += k.q[a] * pr.grad_v0[a][j];
      w += ie * qg;
    }
    if (gamma) w += damp_scale * (*gamma)[j];
    phase[j] = w;
  });
  return phase;
}

// Force-squared stage profile U = 2i h^3/eps (grad Vtilde)^2 with
// grad Vtilde = grad V0 + r.
CVector force_squared_phase(const Problem& pr, const MagnusCoefficients& k) {
  if (!pr.grad_available)
    throw SpecError("compact inner table needs grad V0, which problem '" +
                    pr.name + "' does not provide");
  const SpectralGrid& g = *pr.grid;
  const int d = g.dims();
  const Complex fac = 2.0 * kImag * k.h * k.h * k.h / pr.eps;
  CVector phase(g.size());
  for (std::size_t j = 0; j < phase.size(); ++j) {
    double sq = 0.0;
    for (int a = 0; a < d; ++a) {
      const double ga = pr.grad_v0[a][j] + k.r[a];
      sq += ga * ga;
    }
    phase[j] = fac * sq;
  }
  return phase;
}

// L3 = 6 i h^-2 / eps q.xeff sampled on the grid.
CVector l3_phase(const Problem& pr, const MagnusCoefficients& k) {
  const SpectralGrid& g = *pr.grid;
  const int d = g.dims();
  std::array<const std::vector<double>*, 3> xs{};
  for (int a = 0; a < d; ++a) xs[a] = &pr.effective_x(a);
  const Complex fac = 6.0 * kImag / (k.h * k.h * pr.eps);
  CVector phase(g.size());
  for_each_point(g, [&](std::size_t j, const std::array<int, 3>& idx) {
    double qx = 0.0;
    for (int a = 0; a < d; ++a) qx += k.q[a] * (*xs[a])[idx[a]];
    phase[j] = fac * qx;
  });
  return phase;
}

void apply_scaled_potential(WaveFunction& u, const CVector& w, double b,
                            const CVector* uphase, double cu) {
  CVector exp_phase(w.size());
  if (uphase && cu != 0.0) {
    for (std::size_t j = 0; j < w.size(); ++j)
      exp_phase[j] = std::exp(b * w[j] + cu * (*uphase)[j]);
  } else {
    for (std::size_t j = 0; j < w.size(); ++j) exp_phase[j] = std::exp(b * w[j]);
  }
  for (std::size_t j = 0; j < w.size(); ++j) u.values[j] *= exp_phase[j];
}

}  // namespace

void inner_apply(const SplitScheme& scheme, WaveFunction& u,
                 const InnerParams& params) {
  if (scheme.compact() && !params.u_phase)
    throw SpecError("compact table '" + scheme.name +
                    "' needs a force-squared stage profile");
  const bool has_edge = params.edge_drift.dims() > 0 &&
                        params.edge_drift.max_abs() != 0.0;
  const std::size_t n = scheme.stages.size();
  const bool merge_right = scheme.stages.back().kind == StageKind::T;
  const bool merge_left = scheme.stages.front().kind == StageKind::T;

  if (has_edge && !merge_right)
    spectral::exp_kinetic_inplace(u, Complex{0.0, 0.0}, params.edge_drift);

  for (std::size_t ri = 0; ri < n; ++ri) {
    const std::size_t i = n - 1 - ri;  // rightmost factor acts first
    const Stage& st = scheme.stages[i];
    if (st.kind == StageKind::T) {
      Vec drift = st.coeff * params.drift;
      if (has_edge && ((i == n - 1 && merge_right) || (i == 0 && merge_left)))
        drift += params.edge_drift;
      spectral::exp_kinetic_inplace(u, st.coeff * params.kin, drift);
    } else {
      apply_scaled_potential(u, *params.w_phase, st.coeff,
                             st.kind == StageKind::WU ? params.u_phase : nullptr,
                             st.u_coeff);
    }
  }

  if (has_edge && !merge_left)
    spectral::exp_kinetic_inplace(u, Complex{0.0, 0.0}, params.edge_drift);
}

field::MagnusCoefficients coefficients_for(const Problem& problem, double t,
                                           double h, int knots) {
  const auto rule = field::gauss_legendre(knots, h);
  return field::magnus_coefficients(problem.laser, t, h, problem.eps, rule);
}

WaveFunction step_s1(const WaveFunction& u, const Problem& problem, double t,
                     double h, const OuterScheme& scheme) {
  if (!problem.grad_available)
    throw SpecError("S1 needs grad V0, which problem '" + problem.name +
                    "' does not provide");
  const MagnusCoefficients k =
      coefficients_for(problem, t, h, problem.default_knots);

  WaveFunction out = u;
  const bool have_commutator = k.p.max_abs() != 0.0;
  std::vector<double> f;
  magnus::MatVec c1_matvec;
  if (have_commutator) {
    f.assign(problem.grid->size(), 0.0);
    for (int a = 0; a < problem.grid->dims(); ++a)
      for (std::size_t j = 0; j < f.size(); ++j)
        f[j] += k.p[a] * problem.grad_v0[a][j];
    c1_matvec = [&problem, &f, &u](const CVector& in, CVector& o) {
      WaveFunction tmp;
      tmp.grid = u.grid;
      tmp.values = in;
      WaveFunction r = magnus::commutator_matvec(problem.grid, f, tmp);
      o = std::move(r.values);
    };
    CVector res;
    magnus::lanczos_expm_adaptive(c1_matvec, out.values, Complex{0.5, 0.0}, res,
                                  scheme.lanczos_m_start, scheme.lanczos_tol);
    out.values = std::move(res);
  }

  const CVector w1 = modified_potential_phase(problem, k, k.c, true);
  CVector uph;
  InnerParams params;
  params.kin = kImag * h * problem.eps;
  params.drift = k.s;
  params.w_phase = &w1;
  if (scheme.inner.compact()) {
    uph = force_squared_phase(problem, k);
    params.u_phase = &uph;
  }
  params.edge_drift = Vec(problem.grid->dims());
  inner_apply(scheme.inner, out, params);

  if (have_commutator) {
    CVector res;
    magnus::lanczos_expm_adaptive(c1_matvec, out.values, Complex{0.5, 0.0}, res,
                                  scheme.lanczos_m_start, scheme.lanczos_tol);
    out.values = std::move(res);
  }
  return out;
}

WaveFunction step_s2(const WaveFunction& u, const Problem& problem, double t,
                     double h, const OuterScheme& scheme) {
  const MagnusCoefficients k =
      coefficients_for(problem, t, h, problem.default_knots);
  const CVector w2 = modified_potential_phase(problem, k, k.c, true);
  CVector uph;
  InnerParams params;
  params.kin = kImag * h * problem.eps;
  params.drift = k.s_tilde;
  params.w_phase = &w2;
  if (scheme.inner.compact()) {
    uph = force_squared_phase(problem, k);
    params.u_phase = &uph;
  }
  params.edge_drift = (6.0 / (h * h)) * k.p;

  WaveFunction out = u;
  inner_apply(scheme.inner, out, params);
  return out;
}

WaveFunction step_s3(const WaveFunction& u, const Problem& problem, double t,
                     double h, const OuterScheme& scheme) {
  const MagnusCoefficients k =
      coefficients_for(problem, t, h, problem.default_knots);
  const CVector l3 = l3_phase(problem, k);

  // W3 = -i h/eps Vtilde - L3 + c~ (gradient-free).
  CVector w3 = modified_potential_phase(problem, k, k.c_tilde, false);
  for (std::size_t j = 0; j < w3.size(); ++j) w3[j] -= l3[j];

  CVector half_l3(l3.size());
  for (std::size_t j = 0; j < l3.size(); ++j) half_l3[j] = 0.5 * l3[j];

  InnerParams params;
  params.kin = kImag * h * problem.eps;
  params.drift = k.s_tilde;
  params.w_phase = &w3;
  params.edge_drift = (6.0 / (h * h)) * k.p;

  WaveFunction out = u;
  spectral::exp_potential_inplace(out, half_l3);
  inner_apply(scheme.inner, out, params);
  spectral::exp_potential_inplace(out, half_l3);
  return out;
}

WaveFunction step_time_ordered(const WaveFunction& u, const Problem& problem,
                               double t, double h, const SplitScheme& scheme) {
  if (scheme.compact())
    throw SpecError("time-ordered baseline supports classical tables only");
  const SpectralGrid& g = *problem.grid;
  const int d = g.dims();
  const auto& veff = problem.effective_v();
  const std::vector<double>* gamma = problem.damping();
  std::array<const std::vector<double>*, 3> xs{};
  for (int a = 0; a < d; ++a) xs[a] = &problem.effective_x(a);

  WaveFunction out = u;
  const Complex kin = kImag * h * problem.eps;
  double tau = t;
  CVector phase(g.size());
  const std::size_t n = scheme.stages.size();
  for (std::size_t ri = 0; ri < n; ++ri) {
    const Stage& st = scheme.stages[n - 1 - ri];
    if (st.kind == StageKind::T) {
      spectral::exp_kinetic_inplace(out, st.coeff * kin, Vec(d));
      tau += st.coeff * h;
    } else {
      const Vec e = problem.laser(tau);
      const Complex m_ihe = -kImag * h / problem.eps;
      const double damp_scale = h / problem.eps;
      for_each_point(g, [&](std::size_t j, const std::array<int, 3>& idx) {
        double vt = veff[j];
        for (int a = 0; a < d; ++a) vt += e[a] * (*xs[a])[idx[a]];
        Complex w = m_ihe * vt;
        if (gamma) w += damp_scale * (*gamma)[j];
        phase[j] = st.coeff * w;
      });
      spectral::exp_potential_inplace(out, phase);
    }
  }
  return out;
}

WaveFunction step_mastbm4(const WaveFunction& u, const Problem& problem,
                          double t, double h, const SplitScheme& table) {
  if (table.compact())
    throw SpecError("MaStBM4 wraps classical tables only");
  const MagnusCoefficients k =
      coefficients_for(problem, t, h, problem.default_knots);
  const CVector y = modified_potential_phase(problem, k, Complex{0.0, 0.0},
                                             /*with_gradient_term=*/false);
  InnerParams params;
  params.kin = kImag * h * problem.eps;
  params.drift = Vec(problem.grid->dims());
  params.w_phase = &y;
  params.edge_drift = 0.5 * k.s;

  WaveFunction out = u;
  inner_apply(table, out, params);
  return out;
}

WaveFunction step(const WaveFunction& u, const Problem& problem, double t,
                  double h, const OuterScheme& scheme) {
  switch (scheme.kind) {
    case OuterKind::S1: return step_s1(u, problem, t, h, scheme);
    case OuterKind::S2: return step_s2(u, problem, t, h, scheme);
    case OuterKind::S3: return step_s3(u, problem, t, h, scheme);
    case OuterKind::TimeOrdered:
      return step_time_ordered(u, problem, t, h, scheme.inner);
    case OuterKind::MaStBM4:
      return step_mastbm4(u, problem, t, h, scheme.inner);
  }
  throw SpecError("unknown outer scheme");
}

}  // namespace splitting
}  // namespace magprop

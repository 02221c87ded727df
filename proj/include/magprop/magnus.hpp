#pragma once

#include <functional>

#include "magprop/field.hpp"
#include "magprop/spectral.hpp"

namespace magprop {
namespace magnus {

using spectral::GridPtr;
using spectral::WaveFunction;

/// The assembled one-step generator
///   Theta4 = i h eps Lap - i h/eps Vtilde - s.grad + i/eps q.(grad V0)
///            + [Lap, p.(grad V0)] + c,
/// with Vtilde = V0 + r.x. Linear in u; skew-Hermitian once the scalar c is
/// removed. Holds references to the caller's sampled arrays, which must
/// outlive the operator.
struct MagnusOperator {
  GridPtr grid;
  field::MagnusCoefficients coeffs;
  const std::vector<double>* v0 = nullptr;                  // size grid->size()
  const std::array<std::vector<double>, 3>* grad_v0 = nullptr;  // d arrays
  double eps = 1.0;

  /// p.(grad V0) sampled on the grid (the commutator multiplier).
  std::vector<double> commutator_profile() const;
};

/// Theta4 applied to u. `include_scalar` drops the c term when false (the
/// Lanczos path exponentiates the skew-Hermitian part only).
WaveFunction apply_theta4(const MagnusOperator& op, const WaveFunction& u,
                          bool include_scalar = true);

/// C1 u = Lap(f u) - f Lap(u) through 4d FFT passes.
WaveFunction commutator_matvec(const GridPtr& grid, std::span<const double> f,
                               const WaveFunction& u);

using MatVec = std::function<void(const CVector& in, CVector& out)>;

/// Workspace for Lanczos iterations on a skew-Hermitian operator: basis
/// vectors plus the tridiagonal (imaginary diagonal alpha, real
/// off-diagonal beta).
struct LanczosWorkspace {
  int m_max = 60;
  std::vector<CVector> basis;
  std::vector<Complex> alpha;
  std::vector<double> beta;
};

struct LanczosResult {
  int iterations = 0;
  bool breakdown = false;       // invariant subspace found; result exact
  double last_correction = 0.0; // norm of the step from m-1 to m iterations
};

/// Krylov approximation of exp(dt_scale * A) v for skew-Hermitian A given
/// through `matvec`. The small exponential is taken via dense
/// eigendecomposition of the m x m tridiagonal. Norm-preserving for real
/// dt_scale regardless of convergence.
LanczosResult lanczos_expm(const MatVec& matvec, const CVector& v, int m,
                           Complex dt_scale, CVector& out,
                           LanczosWorkspace* workspace = nullptr);

WaveFunction lanczos_expm(const MatVec& matvec, const WaveFunction& v, int m,
                          Complex dt_scale);

/// Doubles the iteration count from m_start until the last Krylov correction
/// drops below tol * ||v|| (or breakdown). Returns iterations used.
int lanczos_expm_adaptive(const MatVec& matvec, const CVector& v,
                          Complex dt_scale, CVector& out, int m_start = 2,
                          double tol = 1e-12, int m_cap = 120);

/// Whole-expansion reference step u <- e^c Krylov(exp(Theta4 - c)) u.
WaveFunction theta4_lanczos_step(const MagnusOperator& op,
                                 const WaveFunction& u, int m);

/// Adaptive variant used when a tolerance rather than a fixed m is wanted.
WaveFunction theta4_lanczos_step_adaptive(const MagnusOperator& op,
                                          const WaveFunction& u,
                                          double tol = 1e-13, int m_cap = 200);

/// Largest singular value of C1 = [Lap, diag(f)] estimated by power iteration
/// on -C1^2 (deterministic seeded start).
double commutator_norm_estimate(const GridPtr& grid, std::span<const double> f,
                                int iterations = 40);

}  // namespace magnus
}  // namespace magprop

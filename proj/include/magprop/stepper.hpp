#pragma once

#include "magprop/magnus.hpp"
#include "magprop/problem.hpp"
#include "magprop/scheme.hpp"

namespace magprop {
namespace splitting {

using problems::Problem;
using spectral::WaveFunction;

/// Per-stage inputs of an inner splitting step. A T stage with coefficient a
/// applies exp(a*kin*Lap - (a*drift + edge).grad) where `edge` is nonzero
/// only on the outermost kinetic stages (merged outer exponentials); a W
/// stage applies exp(b*w_phase) pointwise; a WU stage exp(b*w_phase +
/// c*u_phase).
struct InnerParams {
  Complex kin{0.0, 0.0};
  Vec drift;
  const CVector* w_phase = nullptr;
  const CVector* u_phase = nullptr;  // required by compact tables
  Vec edge_drift;                    // folded into first/last T stage
};

/// Applies the stage list right-to-left. When an edge drift is present and
/// the corresponding end of the table is not a T stage, the outer
/// exponential is applied standalone instead of merging.
void inner_apply(const SplitScheme& scheme, WaveFunction& u,
                 const InnerParams& params);

/// One step u(t) -> u(t+h) of the Strang-wrapped commutator scheme:
/// Lanczos(C1/2) . inner(T1+W1) . Lanczos(C1/2). Needs grad V0.
WaveFunction step_s1(const WaveFunction& u, const Problem& problem, double t,
                     double h, const OuterScheme& scheme);

/// Commutator-free scheme: drift exponentials exp(-6 h^-2 p.grad) merged
/// into the edge T stages of the inner table. Needs grad V0 (inside W2).
WaveFunction step_s2(const WaveFunction& u, const Problem& problem, double t,
                     double h, const OuterScheme& scheme);

/// Gradient-free scheme: additionally wraps pointwise exp(3i h^-2/eps q.x).
WaveFunction step_s3(const WaveFunction& u, const Problem& problem, double t,
                     double h, const OuterScheme& scheme);

/// Time-ordered classical splitting baseline: W stages sample the full
/// potential at the running time advanced by the T coefficients.
WaveFunction step_time_ordered(const WaveFunction& u, const Problem& problem,
                               double t, double h, const SplitScheme& scheme);

/// Fourth-order Magnus-Strang step around a user-supplied classical table:
/// exp(-s.grad/2) inner(X+Y) exp(-s.grad/2) with Y = -i h/eps Vtilde.
WaveFunction step_mastbm4(const WaveFunction& u, const Problem& problem,
                          double t, double h, const SplitScheme& table);

/// Dispatch on the outer kind.
WaveFunction step(const WaveFunction& u, const Problem& problem, double t,
                  double h, const OuterScheme& scheme);

/// Shared coefficient computation at the problem's knot count.
field::MagnusCoefficients coefficients_for(const Problem& problem, double t,
                                           double h, int knots);

}  // namespace splitting
}  // namespace magprop

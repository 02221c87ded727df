#pragma once

#include "magprop/grid.hpp"

namespace magprop {
namespace spectral {

/// u <- F^-1 diag(symbol) F u along `axis`. Returns a new state; the in-place
/// variant lives on SpectralGrid::apply_axis_symbol.
WaveFunction apply_diag_fourier(const WaveFunction& u, int axis,
                                std::span<const Complex> symbol);

/// Exact exponential of the commuting kinetic-type family,
///   u <- exp(kin * Lap - drift . grad) u,
/// realized per axis with symbol exp(kin * c2[k] - drift[a] * c1[k]).
/// Callers form kin as (stage coefficient) * i*h*eps.
void exp_kinetic_inplace(WaveFunction& u, Complex kin, const Vec& drift);
WaveFunction exp_kinetic(const WaveFunction& u, Complex kin, const Vec& drift);

/// Pointwise u_j <- exp(phase_j) u_j.
void exp_potential_inplace(WaveFunction& u, std::span<const Complex> phase);
WaveFunction exp_potential(const WaveFunction& u, std::span<const Complex> phase);

/// out <- sum_a F^-1 diag(c2[a]) F u  (the spectral Laplacian of u).
void laplacian(const WaveFunction& u, WaveFunction& out);

/// Spectral first derivative along one axis (used for gradients of sampled
/// potentials when no analytic gradient is supplied).
std::vector<double> spectral_derivative(const SpectralGrid& grid,
                                        std::span<const double> f, int axis);

}  // namespace spectral
}  // namespace magprop

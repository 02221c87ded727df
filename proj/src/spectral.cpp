#include "magprop/spectral.hpp"

namespace magprop {
namespace spectral {

WaveFunction apply_diag_fourier(const WaveFunction& u, int axis,
                                std::span<const Complex> symbol) {
  WaveFunction out = u;
  out.grid->apply_axis_symbol(out.values, axis, symbol);
  return out;
}

void exp_kinetic_inplace(WaveFunction& u, Complex kin, const Vec& drift) {
  const SpectralGrid& g = *u.grid;
  CVector symbol;
  for (int a = 0; a < g.dims(); ++a) {
    const int n = g.points(a);
    symbol.resize(n);
    const double da = (drift.dims() > a) ? drift[a] : 0.0;
    for (int k = 0; k < n; ++k)
      symbol[k] = std::exp(kin * g.c2(a)[k] - da * g.c1(a)[k]);
    g.apply_axis_symbol(u.values, a, symbol);
  }
}

WaveFunction exp_kinetic(const WaveFunction& u, Complex kin, const Vec& drift) {
  WaveFunction out = u;
  exp_kinetic_inplace(out, kin, drift);
  return out;
}

void exp_potential_inplace(WaveFunction& u, std::span<const Complex> phase) {
  if (phase.size() != u.values.size())
    throw SpecError("phase array does not match grid shape");
  for (std::size_t j = 0; j < u.values.size(); ++j)
    u.values[j] *= std::exp(phase[j]);
}

WaveFunction exp_potential(const WaveFunction& u, std::span<const Complex> phase) {
  WaveFunction out = u;
  exp_potential_inplace(out, phase);
  return out;
}

void laplacian(const WaveFunction& u, WaveFunction& out) {
  const SpectralGrid& g = *u.grid;
  out.grid = u.grid;
  out.values.assign(u.values.size(), Complex{0.0, 0.0});
  CVector tmp;
  CVector symbol;
  for (int a = 0; a < g.dims(); ++a) {
    tmp = u.values;
    const int n = g.points(a);
    symbol.resize(n);
    for (int k = 0; k < n; ++k) symbol[k] = Complex{g.c2(a)[k], 0.0};
    g.apply_axis_symbol(tmp, a, symbol);
    for (std::size_t j = 0; j < tmp.size(); ++j) out.values[j] += tmp[j];
  }
}

std::vector<double> spectral_derivative(const SpectralGrid& grid,
                                        std::span<const double> f, int axis) {
  CVector tmp(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) tmp[j] = f[j];
  const int n = grid.points(axis);
  CVector symbol(n);
  for (int k = 0; k < n; ++k) symbol[k] = grid.c1(axis)[k];
  grid.apply_axis_symbol(tmp, axis, symbol);
  std::vector<double> out(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) out[j] = tmp[j].real();
  return out;
}

}  // namespace spectral
}  // namespace magprop

#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <span>

#include "magprop/common.hpp"

namespace magprop {
namespace spectral {

struct AxisBounds {
  double lo = 0.0;
  double hi = 0.0;
};

/// Tensorized equispaced periodic collocation grid with the Fourier symbols
/// of d/dx and d^2/dx^2 per axis.
///
/// Conventions (fixed once, everything downstream relies on them):
///  * bin k maps to signed frequency m_k = k for k < M/2 and k - M for
///    k >= M/2, so the Nyquist bin of an even M carries m = -M/2;
///  * c2[k] = -(pi m_k / L)^2 with L = (hi - lo)/2, real and <= 0;
///  * c1[k] = i pi m_k / L, except the Nyquist bin which is zeroed so the
///    first-derivative matrix stays skew-Hermitian;
///  * grid points x_j = lo + j dx, j = 0..M-1 (right endpoint excluded);
///  * storage is axis-0 fastest: flat index j = i0 + M0*(i1 + M1*i2);
///  * forward FFT unnormalized, inverse carries 1/M.
class SpectralGrid {
 public:
  SpectralGrid(std::span<const AxisBounds> bounds, std::span<const int> points);
  ~SpectralGrid();

  SpectralGrid(const SpectralGrid&) = delete;
  SpectralGrid& operator=(const SpectralGrid&) = delete;

  int dims() const { return dims_; }
  std::size_t size() const { return total_; }
  int points(int axis) const { return m_[axis]; }
  double lo(int axis) const { return lo_[axis]; }
  double hi(int axis) const { return hi_[axis]; }
  double dx(int axis) const { return dx_[axis]; }
  double half_width(int axis) const { return half_width_[axis]; }
  /// Product of dx over axes; the weight of one cell in the discrete L2 norm.
  double cell_volume() const;

  double coord(int axis, int i) const { return lo_[axis] + i * dx_[axis]; }
  const std::vector<double>& coords(int axis) const { return coords_[axis]; }

  const CVector& c1(int axis) const { return c1_[axis]; }
  const std::vector<double>& c2(int axis) const { return c2_[axis]; }

  /// Stride between consecutive points along `axis` in the flat layout.
  std::size_t stride(int axis) const;

  /// In place u <- F^-1 diag(symbol) F u along one axis; other axes untouched.
  /// `symbol` has length points(axis). Bumps the FFT-pass counter by 2.
  void apply_axis_symbol(CVector& values, int axis,
                         std::span<const Complex> symbol) const;

  /// Number of 1-D FFT passes executed through this grid so far (a forward
  /// or inverse sweep over the whole array counts as one pass each).
  std::uint64_t fft_passes() const { return fft_passes_.load(); }
  void reset_fft_passes() const { fft_passes_.store(0); }

 private:
  int dims_;
  std::size_t total_;
  std::array<int, 3> m_{};
  std::array<double, 3> lo_{}, hi_{}, dx_{}, half_width_{};
  std::array<std::vector<double>, 3> coords_;
  std::array<CVector, 3> c1_;
  std::array<std::vector<double>, 3> c2_;

  struct Plans;
  std::unique_ptr<Plans> plans_;
  mutable std::atomic<std::uint64_t> fft_passes_{0};
};

using GridPtr = std::shared_ptr<const SpectralGrid>;

GridPtr make_grid(std::span<const AxisBounds> bounds, std::span<const int> points);
GridPtr make_grid_1d(double lo, double hi, int points);
/// Same bounds and point count along every axis.
GridPtr make_grid_cube(int dims, double lo, double hi, int points);

/// Complex state sampled on a SpectralGrid.
struct WaveFunction {
  GridPtr grid;
  CVector values;

  WaveFunction() = default;
  explicit WaveFunction(GridPtr g) : grid(std::move(g)), values(grid->size()) {}

  /// Grid-weighted L2 norm sqrt(dx^d sum |u_j|^2).
  double norm() const;
  void normalize();
};

/// Grid-weighted L2 distance between two states on the same grid.
double l2_distance(const WaveFunction& a, const WaveFunction& b);

/// Samples fn(x) on the grid (fn receives a Vec of dims() coordinates).
template <typename Fn>
WaveFunction sample(const GridPtr& grid, Fn&& fn) {
  WaveFunction u(grid);
  const int d = grid->dims();
  std::size_t j = 0;
  std::array<int, 3> idx{0, 0, 0};
  for (;;) {
    Vec x(d);
    for (int a = 0; a < d; ++a) x[a] = grid->coord(a, idx[a]);
    u.values[j++] = fn(x);
    int a = 0;
    while (a < d && ++idx[a] == grid->points(a)) idx[a++] = 0;
    if (a == d) break;
  }
  return u;
}

/// Samples a real scalar field on the grid into a flat array.
template <typename Fn>
std::vector<double> sample_real(const GridPtr& grid, Fn&& fn) {
  std::vector<double> out(grid->size());
  const int d = grid->dims();
  std::size_t j = 0;
  std::array<int, 3> idx{0, 0, 0};
  for (;;) {
    Vec x(d);
    for (int a = 0; a < d; ++a) x[a] = grid->coord(a, idx[a]);
    out[j++] = fn(x);
    int a = 0;
    while (a < d && ++idx[a] == grid->points(a)) idx[a++] = 0;
    if (a == d) break;
  }
  return out;
}

}  // namespace spectral
}  // namespace magprop

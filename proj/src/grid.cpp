#include "magprop/grid.hpp"

#include <fftw3.h>

#include <mutex>
#include <numbers>

namespace magprop {
namespace spectral {

namespace {
constexpr double kPi = std::numbers::pi;
// The FFTW planner is not thread safe; plan execution is.
std::mutex planner_mutex;
}  // namespace

// One FFTW plan pair per axis. Plans are built against a scratch buffer with
// FFTW_UNALIGNED so they can execute on any caller array; execution through
// fftw_execute_dft on distinct buffers is thread safe.
struct SpectralGrid::Plans {
  struct AxisPlan {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    std::size_t inner = 0;   // stride of the transformed axis
    std::size_t outer = 0;   // number of contiguous blocks to sweep
    std::size_t block = 0;   // element offset between blocks
  };
  std::array<AxisPlan, 3> axis{};
  CVector scratch;

  ~Plans() {
    std::lock_guard<std::mutex> lock(planner_mutex);
    for (auto& p : axis) {
      if (p.fwd) fftw_destroy_plan(p.fwd);
      if (p.bwd) fftw_destroy_plan(p.bwd);
    }
  }
};

SpectralGrid::SpectralGrid(std::span<const AxisBounds> bounds,
                           std::span<const int> points) {
  if (bounds.size() != points.size() || bounds.empty() || bounds.size() > 3)
    throw SpecError("grid dimension must be 1, 2 or 3");
  dims_ = static_cast<int>(bounds.size());
  total_ = 1;
  for (int a = 0; a < dims_; ++a) {
    if (points[a] < 4) throw SpecError("need at least 4 points per axis");
    if (!(bounds[a].hi > bounds[a].lo))
      throw SpecError("axis interval must be non-degenerate");
    m_[a] = points[a];
    lo_[a] = bounds[a].lo;
    hi_[a] = bounds[a].hi;
    dx_[a] = (hi_[a] - lo_[a]) / m_[a];
    half_width_[a] = (hi_[a] - lo_[a]) / 2.0;
    total_ *= static_cast<std::size_t>(m_[a]);

    coords_[a].resize(m_[a]);
    c1_[a].resize(m_[a]);
    c2_[a].resize(m_[a]);
    const double L = half_width_[a];
    for (int k = 0; k < m_[a]; ++k) {
      coords_[a][k] = lo_[a] + k * dx_[a];
      const int mk = (k < (m_[a] + 1) / 2) ? k : k - m_[a];
      const double w = kPi * mk / L;
      c2_[a][k] = -w * w;
      const bool nyquist = (m_[a] % 2 == 0) && (k == m_[a] / 2);
      c1_[a][k] = nyquist ? Complex{0.0, 0.0} : Complex{0.0, w};
    }
  }

  plans_ = std::make_unique<Plans>();
  plans_->scratch.resize(total_);
  std::lock_guard<std::mutex> lock(planner_mutex);
  auto* buf = reinterpret_cast<fftw_complex*>(plans_->scratch.data());
  for (int a = 0; a < dims_; ++a) {
    auto& p = plans_->axis[a];
    p.inner = stride(a);
    p.block = p.inner * static_cast<std::size_t>(m_[a]);
    p.outer = total_ / p.block;
    const int n = m_[a];
    const int howmany = static_cast<int>(p.inner);
    const int istride = static_cast<int>(p.inner);
    // Lines along this axis within one block start at consecutive offsets.
    p.fwd = fftw_plan_many_dft(1, &n, howmany, buf, nullptr, istride, 1, buf,
                               nullptr, istride, 1, FFTW_FORWARD,
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.bwd = fftw_plan_many_dft(1, &n, howmany, buf, nullptr, istride, 1, buf,
                               nullptr, istride, 1, FFTW_BACKWARD,
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
}

SpectralGrid::~SpectralGrid() = default;

double SpectralGrid::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dims_; ++a) v *= dx_[a];
  return v;
}

std::size_t SpectralGrid::stride(int axis) const {
  std::size_t s = 1;
  for (int a = 0; a < axis; ++a) s *= static_cast<std::size_t>(m_[a]);
  return s;
}

void SpectralGrid::apply_axis_symbol(CVector& values, int axis,
                                     std::span<const Complex> symbol) const {
  if (axis < 0 || axis >= dims_) throw SpecError("axis out of range");
  if (values.size() != total_) throw SpecError("state size does not match grid");

  const auto& p = plans_->axis[axis];
  const int n = m_[axis];
  auto* buf = reinterpret_cast<fftw_complex*>(values.data());
  for (std::size_t b = 0; b < p.outer; ++b)
    fftw_execute_dft(p.fwd, buf + b * p.block, buf + b * p.block);

  const double inv_n = 1.0 / n;
  for (std::size_t b = 0; b < p.outer; ++b) {
    Complex* base = values.data() + b * p.block;
    for (int k = 0; k < n; ++k) {
      const Complex s = symbol[k] * inv_n;
      Complex* line = base + static_cast<std::size_t>(k) * p.inner;
      for (std::size_t i = 0; i < p.inner; ++i) line[i] *= s;
    }
  }

  for (std::size_t b = 0; b < p.outer; ++b)
    fftw_execute_dft(p.bwd, buf + b * p.block, buf + b * p.block);

  fft_passes_.fetch_add(2, std::memory_order_relaxed);
}

GridPtr make_grid(std::span<const AxisBounds> bounds, std::span<const int> points) {
  return std::make_shared<SpectralGrid>(bounds, points);
}

GridPtr make_grid_1d(double lo, double hi, int points) {
  AxisBounds b{lo, hi};
  return make_grid(std::span<const AxisBounds>(&b, 1), std::span<const int>(&points, 1));
}

GridPtr make_grid_cube(int dims, double lo, double hi, int points) {
  std::vector<AxisBounds> b(dims, AxisBounds{lo, hi});
  std::vector<int> m(dims, points);
  return make_grid(b, m);
}

double WaveFunction::norm() const {
  double s = 0.0;
  for (const Complex& z : values) s += std::norm(z);
  return std::sqrt(grid->cell_volume() * s);
}

void WaveFunction::normalize() {
  const double n = norm();
  if (n == 0.0) throw NumericError("cannot normalize the zero state");
  const double inv = 1.0 / n;
  for (Complex& z : values) z *= inv;
}

double l2_distance(const WaveFunction& a, const WaveFunction& b) {
  if (a.grid.get() != b.grid.get() && a.values.size() != b.values.size())
    throw SpecError("states live on different grids");
  double s = 0.0;
  for (std::size_t j = 0; j < a.values.size(); ++j)
    s += std::norm(a.values[j] - b.values[j]);
  return std::sqrt(a.grid->cell_volume() * s);
}

}  // namespace spectral
}  // namespace magprop

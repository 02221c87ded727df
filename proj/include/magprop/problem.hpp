#pragma once

#include <optional>

#include "magprop/field.hpp"
#include "magprop/spectral.hpp"

namespace magprop {
namespace problems {

using spectral::GridPtr;
using spectral::WaveFunction;

/// Complex absorbing boundary data: flattened potential and coordinate plus
/// the damping profile Gamma <= 0 (the absorbing potential is i*Gamma).
struct AbsorberSpec {
  double width = 0.0;
  std::vector<double> v_mod;                    // flattened V0 on the grid
  std::array<std::vector<double>, 3> x_mod;     // flattened coordinate, per axis
  std::vector<double> gamma;                    // <= 0 everywhere
};

/// A ready-to-propagate definition: grid, scaling, potential (with optional
/// analytic gradient), laser, initial state, horizon, observables and an
/// optional absorbing boundary.
struct Problem {
  std::string name;
  GridPtr grid;
  double eps = 1.0;
  double t_final = 1.0;
  int default_knots = 3;

  std::vector<double> v0;                        // raw potential samples
  std::array<std::vector<double>, 3> grad_v0;    // per-axis samples (may be empty)
  bool grad_available = false;
  bool grad_is_spectral = false;                 // true when differentiated spectrally

  field::LaserField laser;
  std::function<WaveFunction(const Problem&)> make_initial;

  std::vector<Vec> centres;                      // well centres for occupancy
  double well_radius = 0.2;

  std::optional<AbsorberSpec> absorber;

  WaveFunction initial_state() const { return make_initial(*this); }

  /// Potential samples the W stages should see (flattened when absorbing).
  const std::vector<double>& effective_v() const {
    return absorber ? absorber->v_mod : v0;
  }
  /// Per-axis coordinate the laser couples to (flattened when absorbing).
  const std::vector<double>& effective_x(int axis) const {
    return absorber ? absorber->x_mod[axis] : grid->coords(axis);
  }
  const std::vector<double>* damping() const {
    return absorber ? &absorber->gamma : nullptr;
  }
};

}  // namespace problems
}  // namespace magprop

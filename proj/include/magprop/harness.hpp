#pragma once

#include "magprop/config.hpp"
#include "magprop/problems.hpp"
#include "magprop/stepper.hpp"

namespace magprop {
namespace harness {

using problems::Problem;
using spectral::WaveFunction;

/// A single propagation request. Exactly one of steps/dt determines the
/// other through N * h = T_final (checked to 1e-12 relative).
struct RunSpec {
  std::string problem = "ex1";
  problems::Overrides overrides;
  std::string scheme = "S2+OMF76";
  long steps = 0;
  double dt = 0.0;
  bool record_wells = false;
  std::vector<splitting::SplitScheme> user_tables;

  /// Resolved step count/size against a horizon.
  std::pair<long, double> resolve_steps(double t_final) const;
};

struct TimePoint {
  double t = 0.0;
  double norm = 0.0;
  std::vector<double> wells;
};

struct RunResult {
  WaveFunction final_state;
  std::vector<TimePoint> series;
  double seconds = 0.0;
  std::uint64_t fft_passes = 0;
  long steps = 0;
  double dt = 0.0;
  bool grad_is_spectral = false;
};

RunResult propagate(const RunSpec& run);
/// Same, against an already-built problem (shared by sweeps).
RunResult propagate(const RunSpec& run, const Problem& problem);

struct ConvergenceRow {
  double h = 0.0;
  double error = 0.0;
  double seconds = 0.0;
  std::uint64_t fft_passes = 0;
};

struct ConvergenceReport {
  std::string problem;
  std::string scheme;
  int grid_points = 0;
  int knots = 0;
  int threads = 1;
  std::vector<ConvergenceRow> rows;  // sorted by decreasing h
  double slope = 0.0;
};

/// Least-squares slope of log(error) vs log(h); rows at the round-off floor
/// (error < 1e-11) are excluded.
double fit_slope(const std::vector<ConvergenceRow>& rows);

/// Runs every scheme over the step-count list, measures the final-state L2
/// distance to a reference computed at h_ref = h_min/8 with the first
/// gradient-capable sixth-order scheme, and fits slopes. Entries may run on
/// `threads` workers; each worker owns its state.
std::vector<ConvergenceReport> convergence_study(
    const std::string& problem_name, const problems::Overrides& overrides,
    const std::vector<std::string>& schemes, const std::vector<long>& steps_list,
    int threads = 1,
    const std::vector<splitting::SplitScheme>& user_tables = {});

/// One file per report: '#'-prefixed header metadata, then full-precision
/// rows "h error seconds ffts".
std::vector<std::string> emit_report(const std::vector<ConvergenceReport>& reports,
                                     const std::string& directory);
ConvergenceReport parse_report(const std::string& path);

/// Build identifier baked in at compile time (for report headers).
const char* build_commit();

}  // namespace harness
}  // namespace magprop

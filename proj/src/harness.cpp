#include "magprop/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#ifndef MAGPROP_GIT_HASH
#define MAGPROP_GIT_HASH "unknown"
#endif

namespace magprop {
namespace harness {

const char* build_commit() { return MAGPROP_GIT_HASH; }

std::pair<long, double> RunSpec::resolve_steps(double t_final) const {
  if (steps > 0 && dt > 0.0) {
    if (std::abs(steps * dt - t_final) > 1e-12 * std::abs(t_final))
      throw SpecError("steps * dt must equal the horizon");
    return {steps, dt};
  }
  if (steps > 0) return {steps, t_final / static_cast<double>(steps)};
  if (dt > 0.0) {
    const long n = std::lround(t_final / dt);
    if (n < 1 || std::abs(n * dt - t_final) > 1e-12 * std::abs(t_final))
      throw SpecError("dt must divide the horizon");
    return {n, dt};
  }
  throw SpecError("either steps or dt must be given");
}

RunResult propagate(const RunSpec& run) {
  const Problem problem = problems::build_problem(run.problem, run.overrides);
  return propagate(run, problem);
}

RunResult propagate(const RunSpec& run, const Problem& problem) {
  const auto scheme = splitting::parse_scheme(run.scheme, run.user_tables);
  const auto [n, h] = run.resolve_steps(problem.t_final);

  RunResult res;
  res.steps = n;
  res.dt = h;
  res.grad_is_spectral = problem.grad_is_spectral;
  problem.grid->reset_fft_passes();

  WaveFunction u = problem.initial_state();
  res.series.reserve(n + 1);
  auto record = [&](double t) {
    TimePoint pt;
    pt.t = t;
    pt.norm = u.norm();
    if (run.record_wells && !problem.centres.empty())
      pt.wells = problems::well_occupation(u, problem.centres,
                                           problem.well_radius);
    res.series.push_back(std::move(pt));
  };

  const auto t0 = std::chrono::steady_clock::now();
  record(0.0);
  for (long i = 0; i < n; ++i) {
    u = splitting::step(u, problem, i * h, h, scheme);
    record((i + 1) * h);
    if (!std::isfinite(res.series.back().norm))
      throw NumericError("state norm became non-finite at step " +
                         std::to_string(i + 1));
  }
  res.seconds = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  res.fft_passes = problem.grid->fft_passes();
  res.final_state = std::move(u);
  return res;
}

double fit_slope(const std::vector<ConvergenceRow>& rows) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rows)
    if (r.error >= 1e-11 && r.error > 0.0 && r.h > 0.0)
      pts.emplace_back(std::log(r.h), std::log(r.error));
  if (pts.size() < 2) return 0.0;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double npts = static_cast<double>(pts.size());
  return (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
}

namespace {

std::string pick_reference_scheme(const Problem& problem) {
  return problem.grad_available ? "S2+OMF76" : "S3+OMF85";
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char ch : s) out.push_back((std::isalnum(static_cast<unsigned char>(ch)) != 0) ? ch : '_');
  return out;
}

}  // namespace

std::vector<ConvergenceReport> convergence_study(
    const std::string& problem_name, const problems::Overrides& overrides,
    const std::vector<std::string>& schemes, const std::vector<long>& steps_list,
    int threads, const std::vector<splitting::SplitScheme>& user_tables) {
  if (schemes.empty() || steps_list.empty())
    throw SpecError("convergence study needs schemes and step counts");

  std::vector<long> sorted_steps = steps_list;
  std::sort(sorted_steps.begin(), sorted_steps.end());  // ascending N = descending h

  // Reference: one fine run at h_ref = h_min / 8 on a worker-local problem.
  const Problem ref_problem = problems::build_problem(problem_name, overrides);
  RunSpec ref_spec;
  ref_spec.problem = problem_name;
  ref_spec.overrides = overrides;
  ref_spec.scheme = pick_reference_scheme(ref_problem);
  ref_spec.steps = sorted_steps.back() * 8;
  ref_spec.user_tables = user_tables;
  const RunResult ref = propagate(ref_spec, ref_problem);

  struct Entry {
    std::size_t scheme_idx;
    long steps;
    ConvergenceRow row;
  };
  std::vector<Entry> entries;
  for (std::size_t si = 0; si < schemes.size(); ++si)
    for (long n : sorted_steps) entries.push_back({si, n, {}});

  const int workers = std::max(1, threads);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::vector<std::string> failures(entries.size());
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= entries.size()) return;
      Entry& e = entries[i];
      try {
        const Problem local = problems::build_problem(problem_name, overrides);
        RunSpec spec;
        spec.problem = problem_name;
        spec.overrides = overrides;
        spec.scheme = schemes[e.scheme_idx];
        spec.steps = e.steps;
        spec.user_tables = user_tables;
        const RunResult res = propagate(spec, local);
        e.row.h = res.dt;
        e.row.error = spectral::l2_distance(res.final_state, ref.final_state);
        e.row.seconds = res.seconds;
        e.row.fft_passes = res.fft_passes;
      } catch (const std::exception& ex) {
        failures[i] = ex.what();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (const std::string& f : failures)
    if (!f.empty()) throw NumericError("convergence entry failed: " + f);

  std::vector<ConvergenceReport> reports(schemes.size());
  for (std::size_t si = 0; si < schemes.size(); ++si) {
    ConvergenceReport& rep = reports[si];
    rep.problem = problem_name;
    rep.scheme = schemes[si];
    rep.grid_points = ref_problem.grid->points(0);
    rep.knots = overrides.knots.value_or(ref_problem.default_knots);
    rep.threads = workers;
  }
  for (const Entry& e : entries) reports[e.scheme_idx].rows.push_back(e.row);
  for (ConvergenceReport& rep : reports) {
    std::sort(rep.rows.begin(), rep.rows.end(),
              [](const ConvergenceRow& a, const ConvergenceRow& b) {
                return a.h > b.h;
              });
    rep.slope = fit_slope(rep.rows);
  }
  return reports;
}

std::vector<std::string> emit_report(const std::vector<ConvergenceReport>& reports,
                                     const std::string& directory) {
  std::filesystem::create_directories(directory);
  std::vector<std::string> paths;
  for (const ConvergenceReport& rep : reports) {
    const std::string path = directory + "/" + sanitize(rep.problem) + "_" +
                             sanitize(rep.scheme) + ".txt";
    std::ofstream out(path);
    if (!out) throw SpecError("cannot write report: " + path);
    out << "# magprop convergence report\n";
    out << "# problem = " << rep.problem << "\n";
    out << "# scheme = " << rep.scheme << "\n";
    out << "# grid = " << rep.grid_points << "\n";
    out << "# knots = " << rep.knots << "\n";
    out << "# commit = " << build_commit() << "\n";
    out << "# threads = " << rep.threads << "\n";
    out << "# columns = h error seconds ffts\n";
    out.precision(17);
    for (const ConvergenceRow& r : rep.rows)
      out << r.h << ' ' << r.error << ' ' << r.seconds << ' ' << r.fft_passes
          << '\n';
    out << "# slope = " << rep.slope << "\n";
    paths.push_back(path);
  }
  return paths;
}

ConvergenceReport parse_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot read report: " + path);
  ConvergenceReport rep;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(2, eq - 2 - 1);
      const std::string value = line.substr(eq + 2);
      if (key == "problem") rep.problem = value;
      else if (key == "scheme") rep.scheme = value;
      else if (key == "grid") rep.grid_points = std::stoi(value);
      else if (key == "knots") rep.knots = std::stoi(value);
      else if (key == "threads") rep.threads = std::stoi(value);
      else if (key == "slope") rep.slope = std::stod(value);
      continue;
    }
    std::istringstream row(line);
    ConvergenceRow r;
    if (row >> r.h >> r.error >> r.seconds >> r.fft_passes)
      rep.rows.push_back(r);
  }
  return rep;
}

}  // namespace harness
}  // namespace magprop

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "magprop/harness.hpp"

using namespace magprop;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string problem = "ex1";
  std::string out_path;
  int grid_points = 0;
  double t_final = 0.0;
  int knots = 0;
  int threads = 1;
};

harness::Config load_config(const CommonOpts& opts) {
  if (opts.config_path.empty()) return harness::Config{};
  return harness::Config::load(opts.config_path);
}

problems::Overrides overrides_from(const CommonOpts& opts,
                                   const harness::Config& cfg) {
  problems::Overrides ov;
  const long cfg_grid = cfg.get_long("grid", 0);
  const double cfg_t = cfg.get_double("t_final", 0.0);
  const long cfg_knots = cfg.get_long("knots", 0);
  if (opts.grid_points > 0)
    ov.points = opts.grid_points;
  else if (cfg_grid > 0)
    ov.points = static_cast<int>(cfg_grid);
  if (opts.t_final > 0.0)
    ov.t_final = opts.t_final;
  else if (cfg_t > 0.0)
    ov.t_final = cfg_t;
  if (opts.knots > 0)
    ov.knots = opts.knots;
  else if (cfg_knots > 0)
    ov.knots = static_cast<int>(cfg_knots);
  return ov;
}

// A config may replace the problem's laser: a built-in by name or a
// tabulated pulse file.
void apply_field_config(problems::Problem& pr, const harness::Config& cfg) {
  if (cfg.has("field.name")) {
    pr.laser = problems::builtin_field(cfg.get("field.name"));
  } else if (cfg.has("field.table")) {
    const int degree = static_cast<int>(cfg.get_long("field.interp_degree", 5));
    pr.laser = field::tabulated_field(
        field::load_field_table(cfg.get("field.table"), degree));
  }
  if (pr.laser.dims != pr.grid->dims())
    throw SpecError("field dimension does not match the problem grid");
}

std::vector<long> parse_steps_list(const std::string& text) {
  std::vector<long> out;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    if (token.empty()) continue;
    out.push_back(std::stol(token));
  }
  return out;
}

int cmd_run(const CommonOpts& opts, const std::string& scheme, long steps,
            double dt, bool wells) {
  const harness::Config cfg = load_config(opts);
  harness::RunSpec spec;
  spec.problem = cfg.has("problem") && opts.problem == "ex1"
                     ? cfg.get("problem")
                     : opts.problem;
  spec.overrides = overrides_from(opts, cfg);
  spec.scheme = scheme.empty() ? cfg.get("scheme", "S2+OMF76") : scheme;
  spec.steps = steps > 0 ? steps : cfg.get_long("steps", 0);
  spec.dt = dt > 0.0 ? dt : cfg.get_double("dt", 0.0);
  spec.record_wells = wells;
  spec.user_tables = cfg.scheme_tables();

  problems::Problem pr = problems::build_problem(spec.problem, spec.overrides);
  apply_field_config(pr, cfg);
  const harness::RunResult res = harness::propagate(spec, pr);

  if (!opts.out_path.empty()) {
    std::ofstream out(opts.out_path);
    if (!out) throw SpecError("cannot write " + opts.out_path);
    out << "# magprop run\n# problem = " << spec.problem
        << "\n# scheme = " << spec.scheme << "\n# steps = " << res.steps
        << "\n# dt = " << res.dt << "\n# commit = " << harness::build_commit()
        << "\n# columns = t norm";
    if (spec.record_wells)
      for (std::size_t j = 0; j < pr.centres.size(); ++j) out << " P" << j + 1;
    out << "\n";
    out.precision(17);
    for (const auto& pt : res.series) {
      out << pt.t << ' ' << pt.norm;
      for (double w : pt.wells) out << ' ' << w;
      out << '\n';
    }
  }
  std::cout << spec.scheme << " on " << spec.problem << ": " << res.steps
            << " steps, final norm " << res.final_state.norm() << ", "
            << res.fft_passes << " FFT passes, " << res.seconds << " s";
  if (res.grad_is_spectral) std::cout << " [spectral gradient]";
  std::cout << "\n";
  return 0;
}

int cmd_converge(const CommonOpts& opts, std::vector<std::string> schemes,
                 const std::string& steps_csv) {
  const harness::Config cfg = load_config(opts);
  if (schemes.empty()) {
    for (const std::string& s : cfg.get_all("scheme")) schemes.push_back(s);
    if (schemes.empty()) schemes = {"S2+OMF76"};
  }
  std::vector<long> steps = parse_steps_list(
      steps_csv.empty() ? cfg.get("steps_list", "") : steps_csv);
  if (steps.empty())
    throw SpecError("converge needs --steps-list (comma separated counts)");
  const std::string problem =
      cfg.has("problem") && opts.problem == "ex1" ? cfg.get("problem")
                                                  : opts.problem;
  const int threads =
      opts.threads > 1 ? opts.threads
                       : static_cast<int>(cfg.get_long("threads", 1));

  const auto reports = harness::convergence_study(
      problem, overrides_from(opts, cfg), schemes, steps, threads,
      cfg.scheme_tables());
  const std::string out_dir =
      opts.out_path.empty() ? std::string("reports") : opts.out_path;
  const auto paths = harness::emit_report(reports, out_dir);
  for (std::size_t i = 0; i < reports.size(); ++i)
    std::cout << reports[i].scheme << ": slope " << reports[i].slope << " -> "
              << paths[i] << "\n";
  return 0;
}

int cmd_eigs(const CommonOpts& opts, int index, int count) {
  const harness::Config cfg = load_config(opts);
  const std::string problem =
      cfg.has("problem") && opts.problem == "ex1" ? cfg.get("problem")
                                                  : opts.problem;
  problems::Problem pr =
      problems::build_problem(problem, overrides_from(opts, cfg));
  std::cout.precision(12);
  for (int k = index; k < index + count; ++k) {
    const auto pair = problems::ground_and_excited_states(pr.grid, pr.v0,
                                                          pr.eps, k);
    std::cout << "E[" << k << "] = " << pair.value << "\n";
  }
  return 0;
}

int cmd_absorber(const std::string& gammas_csv, const std::string& kappas_csv) {
  std::vector<double> gammas, kappas;
  for (const std::string& csv : {gammas_csv, kappas_csv}) {
    std::istringstream in(csv);
    std::string token;
    auto& dst = (&csv == &gammas_csv) ? gammas : kappas;
    while (std::getline(in, token, ','))
      if (!token.empty()) dst.push_back(std::stod(token));
  }
  if (gammas.empty()) gammas = {problems::ex5_absorber_strength()};
  if (kappas.empty()) kappas = {0.3, 0.5, 0.8, 1.2};

  std::cout << "# residual interior mass after traversal\n# gamma";
  for (double k : kappas) std::cout << "  kappa=" << k;
  std::cout << "\n";
  for (double g : gammas) {
    std::cout << g;
    for (double k : kappas)
      std::cout << "  " << problems::absorber_scan_residual(g, k);
    std::cout << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral Magnus-splitting propagator"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string scheme_one;
  std::vector<std::string> schemes;
  long steps = 0;
  double dt = 0.0;
  bool wells = false;
  std::string steps_csv;
  int eig_index = 0, eig_count = 1;
  std::string gammas_csv, kappas_csv;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--problem", opts.problem, "problem name (ex1..ex5)");
    cmd->add_option("--config", opts.config_path, "key = value config file");
    cmd->add_option("--grid", opts.grid_points, "override per-axis grid size");
    cmd->add_option("--t-final", opts.t_final, "override horizon");
    cmd->add_option("--knots", opts.knots, "quadrature knot count");
    cmd->add_option("--out", opts.out_path, "output file or directory");
    cmd->add_option("--threads", opts.threads, "worker threads for sweeps");
  };

  CLI::App* run = app.add_subcommand("run", "propagate one configuration");
  add_common(run);
  run->add_option("--scheme", scheme_one, "scheme string, e.g. S2+OMF76");
  run->add_option("--steps", steps, "number of steps");
  run->add_option("--dt", dt, "step size (must divide the horizon)");
  run->add_flag("--wells", wells, "record well occupation probabilities");

  CLI::App* conv = app.add_subcommand("converge", "convergence/efficiency study");
  add_common(conv);
  conv->add_option("--scheme", schemes, "scheme string (repeatable)");
  conv->add_option("--steps-list", steps_csv, "comma-separated step counts");

  CLI::App* eigs = app.add_subcommand("eigs", "print potential eigenvalues");
  add_common(eigs);
  eigs->add_option("--index", eig_index, "first eigenstate index (0 = ground)");
  eigs->add_option("--count", eig_count, "how many eigenvalues");

  CLI::App* absorb = app.add_subcommand(
      "absorber-calibrate", "scattering scan of the absorbing boundary");
  absorb->add_option("--gamma", gammas_csv, "comma-separated strengths");
  absorb->add_option("--momenta", kappas_csv, "comma-separated packet momenta");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(opts, scheme_one, steps, dt, wells);
    if (conv->parsed()) return cmd_converge(opts, schemes, steps_csv);
    if (eigs->parsed()) return cmd_eigs(opts, eig_index, eig_count);
    if (absorb->parsed()) return cmd_absorber(gammas_csv, kappas_csv);
  } catch (const SpecError& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

// cavspec: transmission spectra, susceptibility, normal modes and parameter
// fits for an optical cavity collectively coupled to multi-level atoms.

#include <complex>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cavspec/analysis.hpp"
#include "cavspec/config.hpp"
#include "cavspec/csv.hpp"
#include "cavspec/dynamics.hpp"
#include "cavspec/errors.hpp"
#include "cavspec/fit.hpp"
#include "cavspec/modes.hpp"
#include "cavspec/presets.hpp"
#include "cavspec/response.hpp"

namespace {

using namespace cavspec;

struct SourceOptions {
  std::string config_path;
  std::string preset_name;
  std::optional<double> g_n;       // preset native unit; Gamma-units with --config
  std::optional<double> delta_c;   // preset native unit; Gamma-units with --config
  std::optional<double> dp_min;    // Gamma-units
  std::optional<double> dp_max;    // Gamma-units
  std::optional<int> points;
};

void add_source_options(CLI::App* cmd, SourceOptions& opts) {
  auto* config = cmd->add_option("--config", opts.config_path, "JSON config file");
  auto* preset = cmd->add_option("--preset", opts.preset_name, "named parameter set");
  config->excludes(preset);
  cmd->add_option("--gN", opts.g_n,
                  "collective coupling g*sqrt(N) (preset native unit, Gamma with --config)");
  cmd->add_option("--delta-c", opts.delta_c,
                  "cavity detuning override (preset native unit, Gamma with --config)");
  cmd->add_option("--dp-min", opts.dp_min, "scan start, Gamma-units");
  cmd->add_option("--dp-max", opts.dp_max, "scan end, Gamma-units");
  cmd->add_option("--points", opts.points, "scan sample count");
}

ParsedConfig resolve_config(const SourceOptions& opts) {
  ParsedConfig parsed;
  if (!opts.preset_name.empty()) {
    PresetOptions po;
    po.g_sqrt_n = opts.g_n;
    po.delta_c = opts.delta_c;
    parsed = parse_config(render_preset(opts.preset_name, po));
  } else if (!opts.config_path.empty()) {
    parsed = load_config_file(opts.config_path);
    if (opts.g_n) parsed.system.coupling = CollectiveCoupling::uniform(*opts.g_n, 3);
    if (opts.delta_c) parsed.system.cavity.delta_c = *opts.delta_c;
  } else {
    throw ValidationError("one of --config or --preset is required");
  }
  if (opts.dp_min) parsed.system.grid.dp_min = *opts.dp_min;
  if (opts.dp_max) parsed.system.grid.dp_max = *opts.dp_max;
  if (opts.points) parsed.system.grid.points = *opts.points;
  parsed.system.validate();
  return parsed;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open output file: " + path);
  out << content;
}

void write_plot_script(const std::string& script_path, const std::string& data_path,
                       const std::string& plot_clause, const std::string& ylabel) {
  if (script_path.empty()) return;
  if (data_path.empty()) {
    throw ValidationError("--script requires --out (the script references the data file)");
  }
  std::ostringstream os;
  os << "# companion plot script (gnuplot syntax, plain-text data)\n"
     << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set xlabel 'delta_p / Gamma'\n"
     << "set ylabel '" << ylabel << "'\n"
     << "plot " << plot_clause << "\n";
  std::ofstream out(script_path, std::ios::binary);
  if (!out) throw ValidationError("cannot open script file: " + script_path);
  out << os.str();
}

nlohmann::json roots_to_json(const std::vector<std::complex<double>>& roots) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& z : roots) arr.push_back({z.real(), z.imag()});
  return arr;
}

int cmd_spectrum(const SourceOptions& src, const std::string& out, const std::string& script) {
  const ParsedConfig cfg = resolve_config(src);
  const Spectrum s = scan_spectrum(cfg.system);
  std::ostringstream os;
  csv::write_spectrum(os, s);
  write_output(out, os.str());
  write_plot_script(script, out, "'" + out + "' using 1:4 with lines", "intensity");
  return 0;
}

int cmd_chi(const SourceOptions& src, const std::string& out, const std::string& script) {
  const ParsedConfig cfg = resolve_config(src);
  const std::vector<double> dp = cfg.system.grid.sample();
  std::vector<std::complex<double>> chi(dp.size());
  for (std::size_t k = 0; k < dp.size(); ++k) {
    chi[k] = susceptibility(cfg.system.ladder, cfg.system.coupling, dp[k]);
  }
  std::ostringstream os;
  csv::write_chi(os, dp, chi);
  write_output(out, os.str());
  write_plot_script(script, out,
                    "'" + out + "' using 1:2 with lines, '" + out + "' using 1:3 with lines",
                    "chi / Gamma");
  return 0;
}

int cmd_modes(const SourceOptions& src, const std::string& out) {
  const ParsedConfig cfg = resolve_config(src);
  const PolaritonModes modes =
      eigenmodes(mode_matrix(cfg.system.ladder, cfg.system.coupling, cfg.system.cavity.delta_c));
  std::ostringstream os;
  csv::write_modes(os, modes);
  write_output(out, os.str());
  return 0;
}

int cmd_branches(const SourceOptions& src, double dc_min, double dc_max, int dc_points,
                 const std::string& out, const std::string& script) {
  if (!(dc_min < dc_max) || dc_points < 2) {
    throw ValidationError("branches: need dc_min < dc_max and dc_points >= 2");
  }
  const ParsedConfig cfg = resolve_config(src);
  std::vector<double> dc(static_cast<std::size_t>(dc_points));
  const double step = (dc_max - dc_min) / static_cast<double>(dc_points - 1);
  for (int i = 0; i < dc_points; ++i) dc[static_cast<std::size_t>(i)] = dc_min + step * i;
  dc.back() = dc_max;
  const BranchScan scan = branch_scan(cfg.system.ladder, cfg.system.coupling, dc);
  std::ostringstream os;
  csv::write_branches(os, scan);
  write_output(out, os.str());
  std::ostringstream clause;
  for (std::size_t j = 0; j < scan.modes.front().size(); ++j) {
    if (j) clause << ", ";
    clause << "'" << out << "' using 1:" << (j + 2) << " with lines";
  }
  write_plot_script(script, out, clause.str(), "lambda / Gamma");
  return 0;
}

int cmd_poly(const SourceOptions& src, std::optional<double> delta_flag,
             const std::string& out) {
  const ParsedConfig cfg = resolve_config(src);
  const auto& offsets = cfg.system.ladder.offsets;
  const double d34 = -offsets[1];
  const double d23 = offsets[1] - offsets[0];
  if (!delta_flag && std::abs(d34 - 2.0 * d23) > 1e-9 * std::max(1.0, d34)) {
    throw ValidationError(
        "poly: the closed-form quartic assumes splittings (2*delta, 4*delta); "
        "this config has a different ratio (pass --delta to audit anyway)");
  }
  const auto& gs = cfg.system.coupling.strengths;
  if (!(gs[0] == gs[1] && gs[1] == gs[2])) {
    throw ValidationError("poly: the closed-form quartic assumes equal couplings");
  }
  const double g = gs[0];
  const double delta = delta_flag.value_or(d23 / 2.0);
  const double dc = cfg.system.cavity.delta_c;

  const QuarticAudit audit = quartic_audit(g, delta, dc);
  nlohmann::json doc;
  doc["g_sqrt_n"] = audit.g_sqrt_n;
  doc["delta"] = audit.delta;
  doc["delta_c"] = audit.delta_c;
  doc["reference_coefficients"] = audit.reference;
  doc["energy_convention_expansion"] = audit.energy_expansion;
  doc["probe_convention_expansion"] = audit.probe_expansion;
  doc["coefficient_matches_energy"] = audit.matches_energy;
  doc["coefficient_matches_probe"] = audit.matches_probe;
  doc["reference_matches_energy"] = audit.reference_matches_energy;
  doc["reference_roots"] = roots_to_json(audit.reference_roots);
  doc["energy_expansion_roots"] = roots_to_json(audit.energy_roots);
  doc["probe_eigenvalues"] = audit.probe_eigenvalues;
  write_output(out, doc.dump(2) + "\n");
  return 0;
}

int cmd_dynamics(const SourceOptions& src, double dp, std::optional<double> dt_flag,
                 double t_end, const std::string& out) {
  const ParsedConfig cfg = resolve_config(src);
  const LinearSystem sys = linear_system(cfg.system, dp);
  double dt = dt_flag.value_or(
      std::min(0.01, sys.max_eigenvalue_magnitude > 0.0 ? 2.0 / sys.max_eigenvalue_magnitude
                                                        : 0.01));
  const Eigen::VectorXcd v0 = Eigen::VectorXcd::Zero(sys.dim());
  const Trajectory traj = integrate(sys, v0, dt, t_end);

  if (!out.empty()) {
    std::ostringstream os;
    csv::write_trajectory(os, traj);
    write_output(out, os.str());
  }

  const std::complex<double> chi = susceptibility(cfg.system.ladder, cfg.system.coupling, dp);
  const std::complex<double> closed =
      cfg.system.cavity.drive /
      (std::complex<double>(cfg.system.cavity.kappa, cfg.system.cavity.delta_c - dp) -
       std::complex<double>(0.0, 1.0) * chi);
  const std::complex<double> integrated = traj.states.back()(0);
  const double rel = std::abs(integrated - closed) / std::abs(closed);
  std::cout << "steady_state_relative_error=" << csv::format(rel) << "\n";
  return 0;
}

int cmd_peaks(const SourceOptions& src, double min_prominence, const std::string& out) {
  const ParsedConfig cfg = resolve_config(src);
  const auto peaks = find_peaks(scan_spectrum(cfg.system), min_prominence);
  std::ostringstream os;
  csv::write_peaks(os, peaks);
  write_output(out, os.str());
  return 0;
}

int cmd_fit(const SourceOptions& src, const std::string& data_path, const std::string& out,
            const std::string& model_out) {
  const ParsedConfig cfg = resolve_config(src);
  std::ifstream in(data_path);
  if (!in) throw ValidationError("fit: cannot open data file: " + data_path);
  const csv::FitData data = csv::read_fit_data(in);
  const FitProblem prob = make_fit_problem(cfg, data.dp, data.intensity, data.weight);
  const FitResult result = fit_spectrum(prob);

  nlohmann::json doc;
  doc["converged"] = result.converged;
  doc["iterations"] = result.iterations;
  doc["residual_rms"] = result.residual_rms;
  doc["jacobian_condition"] = result.jacobian_condition;
  nlohmann::json params;
  for (FitParam p : prob.free) {
    params[fit_param_name(p)] = get_fit_param(result.parameters, p);
  }
  doc["parameters"] = params;
  doc["strengths"] = result.parameters.strengths;
  doc["kappa"] = result.parameters.kappa;
  doc["delta_c"] = result.parameters.delta_c;
  doc["scale"] = result.parameters.scale;
  doc["offset"] = result.parameters.offset;
  write_output(out, doc.dump(2) + "\n");

  if (!model_out.empty()) {
    // best-fit model on the data grid, recovered from the residual definition
    std::vector<double> model(prob.dp.size());
    const std::vector<double> r = residuals(prob, result.parameters);
    for (std::size_t k = 0; k < model.size(); ++k) {
      const double w = prob.weight.empty() ? 1.0 : prob.weight[k];
      model[k] = prob.intensity[k] + (w != 0.0 ? r[k] / w : 0.0);
    }
    std::ostringstream os;
    os << "delta_p,intensity\n";
    for (std::size_t k = 0; k < model.size(); ++k) {
      os << csv::format(prob.dp[k]) << ',' << csv::format(model[k]) << '\n';
    }
    write_output(model_out, os.str());
  }

  if (!result.converged) {
    std::cerr << "fit did not converge within " << prob.max_iterations << " iterations"
              << " (residual_rms=" << result.residual_rms << ")\n";
    return 3;
  }
  return 0;
}

int cmd_preset(const std::string& name, std::optional<double> g_n, std::optional<double> dc,
               const std::string& out) {
  if (name.empty()) {
    std::ostringstream os;
    for (const auto& p : preset_table()) {
      os << p.name << " — " << p.description << "\n";
    }
    write_output(out, os.str());
    return 0;
  }
  PresetOptions po;
  po.g_sqrt_n = g_n;
  po.delta_c = dc;
  write_output(out, render_preset(name, po));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cavity transmission spectra and normal modes of collectively "
               "coupled multi-level atoms"};
  app.require_subcommand(1);

  SourceOptions src;
  std::string out, script, data_path, model_out, preset_name;
  double dc_min = -40.0, dc_max = 20.0;
  int dc_points = 601;
  double dp = 0.0, t_end = 200.0;
  std::optional<double> dt_flag, delta_flag, preset_g, preset_dc;
  double min_prominence = kDefaultMinProminence;

  auto* spectrum = app.add_subcommand("spectrum", "transmission intensity over the probe scan");
  add_source_options(spectrum, src);
  spectrum->add_option("--out", out, "output CSV (default stdout)");
  spectrum->add_option("--script", script, "write a companion plot script");

  auto* chi = app.add_subcommand("chi", "complex susceptibility over the probe scan");
  add_source_options(chi, src);
  chi->add_option("--out", out, "output CSV (default stdout)");
  chi->add_option("--script", script, "write a companion plot script");

  auto* modes = app.add_subcommand("modes", "normal-mode eigenvalues and weights");
  add_source_options(modes, src);
  modes->add_option("--out", out, "output CSV (default stdout)");

  auto* branches = app.add_subcommand("branches", "eigenvalue branches versus cavity detuning");
  add_source_options(branches, src);
  branches->add_option("--dc-min", dc_min, "detuning scan start, Gamma-units");
  branches->add_option("--dc-max", dc_max, "detuning scan end, Gamma-units");
  branches->add_option("--dc-points", dc_points, "detuning sample count");
  branches->add_option("--out", out, "output CSV (default stdout)");
  branches->add_option("--script", script, "write a companion plot script");

  auto* poly = app.add_subcommand("poly", "audit of the closed-form quartic against the "
                                          "determinant expansion");
  add_source_options(poly, src);
  poly->add_option("--delta", delta_flag, "splitting unit delta override, Gamma-units");
  poly->add_option("--out", out, "output JSON (default stdout)");

  auto* dynamics = app.add_subcommand("dynamics", "time integration against the steady state");
  add_source_options(dynamics, src);
  dynamics->add_option("--dp", dp, "probe detuning, Gamma-units")->required();
  dynamics->add_option("--dt", dt_flag, "integration step, 1/Gamma");
  dynamics->add_option("--t-end", t_end, "integration horizon, 1/Gamma");
  dynamics->add_option("--out", out, "trajectory CSV path");

  auto* peaks = app.add_subcommand("peaks", "detected transmission peaks");
  add_source_options(peaks, src);
  peaks->add_option("--min-prominence", min_prominence, "prominence threshold");
  peaks->add_option("--out", out, "output CSV (default stdout)");

  auto* fit = app.add_subcommand("fit", "least-squares parameter fit to measured data");
  add_source_options(fit, src);
  fit->add_option("--data", data_path, "CSV with header delta_p,intensity[,weight]")->required();
  fit->add_option("--out", out, "fit result JSON (default stdout)");
  fit->add_option("--model-out", model_out, "best-fit spectrum CSV on the data grid");

  auto* preset = app.add_subcommand("preset", "list presets or emit one as a config");
  preset->add_option("name", preset_name, "preset name (omit to list)");
  preset->add_option("--gN", preset_g, "coupling g*sqrt(N), preset native unit");
  preset->add_option("--delta-c", preset_dc, "cavity detuning, preset native unit");
  preset->add_option("--out", out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (spectrum->parsed()) return cmd_spectrum(src, out, script);
    if (chi->parsed()) return cmd_chi(src, out, script);
    if (modes->parsed()) return cmd_modes(src, out);
    if (branches->parsed()) return cmd_branches(src, dc_min, dc_max, dc_points, out, script);
    if (poly->parsed()) return cmd_poly(src, delta_flag, out);
    if (dynamics->parsed()) return cmd_dynamics(src, dp, dt_flag, t_end, out);
    if (peaks->parsed()) return cmd_peaks(src, min_prominence, out);
    if (fit->parsed()) return cmd_fit(src, data_path, out, model_out);
    if (preset->parsed()) return cmd_preset(preset_name, preset_g, preset_dc, out);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

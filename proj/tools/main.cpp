// Command-line front end: run closed-loop simulations, sweep a parameter,
// render figures from logs, and validate configurations.
//
// Exit codes: 0 success, 2 configuration problem, 3 runtime failure
// (divergence, non-finite derivatives, failed sweep entries), 4 I/O failure.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dobac/analysis.hpp"
#include "dobac/errors.hpp"
#include "dobac/logio.hpp"
#include "dobac/plot.hpp"
#include "dobac/scenario.hpp"
#include "dobac/sim.hpp"

namespace fs = std::filesystem;
using namespace dobac;

namespace {

struct CommonOpts {
  std::string preset, config;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--preset", o.preset, "scenario preset name (msd-cubic-paper)");
  cmd->add_option("--config", o.config, "JSON configuration file");
  cmd->add_option("--set", o.sets, "dotted-path override, e.g. rejection.k_eta=10")
      ->type_size(1);
}

ScenarioConfig load_from(const CommonOpts& o) {
  if (o.preset.empty() && o.config.empty())
    throw ConfigError("give --preset and/or --config");
  std::optional<std::string> preset, config;
  if (!o.preset.empty()) preset = o.preset;
  if (!o.config.empty()) config = o.config;
  return load_scenario(preset, config, o.sets);
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory \"" + dir + "\": " + ec.message());
}

std::vector<std::pair<std::string, std::string>> make_report(const RunLog& log,
                                                             const SimModel& M) {
  const double T = log.meta.t_end;
  const double w0 = 0.6 * T;
  const RunMetrics full = run_metrics(log, 0.0, T);
  const RunMetrics win = run_metrics(log, w0, T);
  const TheoremBounds tb = theorem_bounds(log, M, w0, T);
  const double band = 1.05 * win.sup_e;
  const double t_settle =
      settling_time(log.time(), log.block_norm("e", log.meta.n), band);

  std::vector<std::pair<std::string, std::string>> p;
  auto num = [&](const std::string& k, double v) { p.emplace_back(k, format_double(v)); };
  p.emplace_back("name", log.meta.name);
  p.emplace_back("mode", log.meta.mode);
  num("k_eta", log.meta.k_eta);
  num("u_bar", log.meta.u_bar);
  num("f_bar", log.meta.f_bar);
  num("observer_gain", log.meta.observer_gain);
  num("h", log.meta.h);
  num("t_end", T);
  num("window_start", w0);
  num("rms_e_full", full.rms_e);
  num("rms_e_window", win.rms_e);
  num("sup_e_full", full.sup_e);
  num("sup_e_window", win.sup_e);
  num("sup_u_drj", full.sup_u_drj);
  if (!std::isnan(full.sup_rate_fd)) num("sup_u_drj_rate", full.sup_rate_fd);
  num("sup_eta_window", win.sup_eta);
  num("sup_e_du_window", win.sup_e_du);
  num("sup_e_d_window", win.sup_e_d);
  num("final_lyap", full.final_lyap);
  num("settling_band", band);
  num("settling_time", t_settle);
  num("eps_du", tb.eps_du);
  num("eps_eta", tb.eps_eta);
  num("bound_e_d", tb.b_ed_sup);
  num("bound_e_dhat_dot", tb.b_edd_sup);
  num("epsilon_r", tb.epsilon_r);
  p.emplace_back("bound_satisfied", tb.sup_e <= tb.epsilon_r ? "yes" : "no");
  return p;
}

int cmd_run(const CommonOpts& common, const std::string& out_dir, int decimate) {
  ScenarioConfig sc = load_from(common);
  if (decimate > 0)
    sc = apply_override(sc, "sim.decimate", std::to_string(decimate));
  const SimModel M = SimModel::build(sc);
  const RunLog log = simulate(sc);
  ensure_dir(out_dir);
  const std::string csv = out_dir + "/run.csv";
  const std::string rep = out_dir + "/report.txt";
  write_csv(csv, log);
  write_report(rep, make_report(log, M));
  const RunMetrics win = run_metrics(log, 0.6 * sc.sim.t_end, sc.sim.t_end);
  std::cout << "run " << sc.name << " mode=" << log.meta.mode
            << " rms_e_window=" << format_double(win.rms_e) << "\n"
            << "wrote " << csv << "\nwrote " << rep << "\n";
  return 0;
}

int cmd_sweep(const CommonOpts& common, const std::string& key,
              const std::vector<std::string>& values, const std::string& out_dir) {
  const ScenarioConfig base = load_from(common);
  const std::vector<SweepEntry> entries = sweep_runs(base, key, values);
  ensure_dir(out_dir);

  std::vector<std::pair<std::string, std::string>> rep;
  rep.emplace_back("sweep_key", key);
  rep.emplace_back("entries", std::to_string(entries.size()));
  bool all_ok = true;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const SweepEntry& e = entries[i];
    const std::string stem = "entry" + std::to_string(i + 1);
    rep.emplace_back(stem + ".value", e.value);
    rep.emplace_back(stem + ".status", e.status);
    if (!e.ok) {
      all_ok = false;
      continue;
    }
    const std::string csv = out_dir + "/sweep-" + std::to_string(i + 1) + ".csv";
    write_csv(csv, e.log);
    rep.emplace_back(stem + ".csv", csv);
    const double T = e.log.meta.t_end;
    const RunMetrics win = run_metrics(e.log, 0.6 * T, T);
    rep.emplace_back(stem + ".rms_e_window", format_double(win.rms_e));
    rep.emplace_back(stem + ".sup_eta_window", format_double(win.sup_eta));
    rep.emplace_back(stem + ".sup_u_drj", format_double(win.sup_u_drj));
  }
  const std::string rep_path = out_dir + "/sweep-report.txt";
  write_report(rep_path, rep);
  std::cout << "sweep " << key << " over " << entries.size() << " values, "
            << (all_ok ? "all ok" : "with failures") << "\nwrote " << rep_path << "\n";
  return all_ok ? 0 : 3;
}

int cmd_plot(const std::vector<std::string>& inputs, const std::string& kind,
             const std::string& out_path) {
  std::vector<RunLog> logs;
  logs.reserve(inputs.size());
  for (const std::string& path : inputs) logs.push_back(read_csv(path));
  const std::string svg = render_svg(logs, plot_kind_from_string(kind));
  write_svg(out_path, svg);
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

int cmd_validate(const CommonOpts& common, bool dump) {
  const ScenarioConfig sc = load_from(common);
  if (dump) {
    std::cout << dump_scenario(sc) << "\n";
    return 0;
  }
  const SimModel M = SimModel::build(sc);
  std::cout << "configuration ok: " << sc.name << "\n"
            << "  state dim " << M.layout.n << ", V-basis " << M.layout.m_v
            << ", W-basis " << M.layout.m_w << "\n"
            << "  matched k_x* = [";
  for (Eigen::Index i = 0; i < M.matched.k_x_star.size(); ++i)
    std::cout << (i ? ", " : "") << format_double(M.matched.k_x_star[i]);
  std::cout << "], k_r* = " << format_double(M.matched.k_r_star) << "\n"
            << "  lambda_min(Q) = " << format_double(M.lambda_min_Q) << ", steps = "
            << M.steps << "\n";
  return 0;
}

template <typename F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const Diverged& e) {
    std::cerr << "error: " << e.what() << " (t=" << e.t << ")\n";
    return 3;
  } catch (const NonFiniteDerivative& e) {
    std::cerr << "error: " << e.what() << " (t=" << e.t << ")\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const OutsideSet& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Unmatchable& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NotLyapunov& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SchemaMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const WindowOutOfRange& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"closed-loop simulator for limited adaptive disturbance rejection"};
  app.require_subcommand(1);

  CommonOpts run_opts;
  std::string run_out = "out";
  int run_decimate = 0;
  CLI::App* run = app.add_subcommand("run", "simulate one scenario");
  add_common(run, run_opts);
  run->add_option("--out", run_out, "output directory");
  run->add_option("--decimate", run_decimate, "log every n-th step");

  CommonOpts sweep_opts;
  std::string sweep_key, sweep_out = "out";
  std::vector<std::string> sweep_values;
  CLI::App* sweep = app.add_subcommand("sweep", "run one scenario per value");
  add_common(sweep, sweep_opts);
  sweep->add_option("--key", sweep_key, "dotted config path to sweep")->required();
  sweep->add_option("--values", sweep_values, "comma-separated values")
      ->required()
      ->delimiter(',');
  sweep->add_option("--out", sweep_out, "output directory");

  std::vector<std::string> plot_inputs;
  std::string plot_kind, plot_out = "plot.svg";
  CLI::App* plot = app.add_subcommand("plot", "render a figure from run logs");
  plot->add_option("inputs", plot_inputs, "log CSV files")->required();
  plot->add_option("--kind", plot_kind, "tracking | error-comparison | u-drj | d-vs-dhat | eta")
      ->required();
  plot->add_option("--out", plot_out, "output SVG path");

  CommonOpts val_opts;
  bool val_dump = false;
  CLI::App* validate = app.add_subcommand("validate", "check a configuration");
  add_common(validate, val_opts);
  validate->add_flag("--dump", val_dump, "print the normalized configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (run->parsed())
    return guarded([&] { return cmd_run(run_opts, run_out, run_decimate); });
  if (sweep->parsed())
    return guarded([&] { return cmd_sweep(sweep_opts, sweep_key, sweep_values, sweep_out); });
  if (plot->parsed())
    return guarded([&] { return cmd_plot(plot_inputs, plot_kind, plot_out); });
  if (validate->parsed())
    return guarded([&] { return cmd_validate(val_opts, val_dump); });
  return 2;
}

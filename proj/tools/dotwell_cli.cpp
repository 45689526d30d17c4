// Command-line front end: single trajectories, figure presets, custom
// sweeps, the brute-force continuum validation, and the acceptance suite.
//
// Exit codes: 0 success, 2 usage/config error, 3 numerical failure.

#include "dotwell/acceptance.hpp"
#include "dotwell/experiments.hpp"
#include "dotwell/oracle.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path resolve_out_dir(const std::string& flag_value) {
  // DOTWELL_OUT wins over the flag so batch jobs can redirect everything
  if (const char* env = std::getenv("DOTWELL_OUT")) return fs::path(env);
  return fs::path(flag_value);
}

void write_file(const fs::path& dir, const std::string& name,
                const std::string& content) {
  fs::create_directories(dir);
  std::ofstream out(dir / name, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
  std::cout << "wrote " << (dir / name).string() << "\n";
}

// Minimal matplotlib script referencing only the CSV it sits next to.
std::string plot_script(const std::string& csv_name, const std::string& x_col,
                        const std::vector<std::string>& group_cols) {
  std::string groups;
  for (const auto& col : group_cols) {
    if (!groups.empty()) groups += ", ";
    groups += "\"" + col + "\"";
  }
  return "import pandas as pd\n"
         "import matplotlib.pyplot as plt\n"
         "df = pd.read_csv(\"" + csv_name + "\")\n"
         "for key, grp in df.groupby([" + groups + "]):\n"
         "    plt.plot(grp[\"" + x_col + "\"], grp[\"P1\"], label=str(key))\n"
         "plt.xlabel(\"" + x_col + "\")\n"
         "plt.ylabel(\"P1\")\n"
         "plt.legend()\n"
         "plt.savefig(\"" + csv_name.substr(0, csv_name.size() - 4) + ".png\", dpi=150)\n";
}

dotwell::ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  json j;
  in >> j;
  return dotwell::ExperimentConfig::from_json(j);
}

int cmd_simulate(const dotwell::ExperimentConfig& cfg, const fs::path& out_dir) {
  using namespace dotwell;
  const auto grid = detail::linspace(0.0, cfg.t_max, cfg.n_points);
  const DensityMatrix rho0 = pure_state(Vector3c(1, 0, 0));

  CurveSet set;
  set.abscissa_name = "t";
  set.label_keys = {"y", "scheme"};
  json summary = {{"version", ExperimentConfig::kSchemaVersion},
                  {"config", cfg.to_json()}};

  if (cfg.mode == "frequent") {
    if (!(cfg.tau > 0.0))
      throw CLI::ValidationError("--tau", "frequent mode needs tau > 0");
    const int n = std::max(1, static_cast<int>(std::floor(cfg.t_max / cfg.tau)));
    const auto run = run_frequent(rho0, cfg.sys, {cfg.tau, n, MeasureMode::NonSelective});
    Curve curve;
    curve.labels = {{"y", detail::fmt(cfg.sys.Lambda * cfg.tau)}, {"scheme", "frequent"}};
    for (std::size_t k = 0; k < run.times.size(); ++k) {
      const auto occ = occupations(run.states[k]);
      curve.rows.push_back({run.times[k], occ.P1, occ.P2, occ.PR, occ.Pleaked});
    }
    set.curves.push_back(std::move(curve));
    summary["final_state"] = density_matrix_to_json(run.states.back());
  } else if (cfg.mode == "continuous") {
    auto curve_for = [&](double y) {
      const auto det = DetectorParams::from_average(cfg.sys.Lambda / y, cfg.delta);
      const Liouvillian l(cfg.sys, det);
      const auto traj = evolve(rho0, l, grid);
      Curve curve;
      curve.labels = {{"y", detail::fmt(y)}, {"scheme", "continuous"}};
      for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto occ = occupations(traj[k]);
        curve.rows.push_back({grid[k], occ.P1, occ.P2, occ.PR, occ.Pleaked});
      }
      return curve;
    };
    set.curves = detail::parallel_map(cfg.y_values, curve_for, cfg.workers);
  } else {
    throw CLI::ValidationError("--mode", "must be continuous or frequent");
  }

  write_file(out_dir, "trajectory.csv", to_csv(set));
  write_file(out_dir, "summary.json", summary.dump(2) + "\n");
  return 0;
}

int cmd_figure(const std::string& id, const fs::path& out_dir, int workers) {
  using namespace dotwell;
  CurveSet set;
  if (id == "fig2a" || id == "fig2b" || id == "fig2c" || id == "fig2d") {
    const auto preset = fig2_preset(id[4]);
    set = run_fig2(id[4], preset.y_values, preset.sys.Lambda, preset.n_points,
                   preset.t_max, workers);
  } else if (id == "fig3b") {
    set = run_fig3b(20.0, 5.0, {}, workers);
  } else if (id == "fig4a" || id == "fig4b") {
    set = run_fig4(id[4], {2.5, 5.0, 10.0}, 2.0, 401, workers);
  } else {
    throw CLI::ValidationError("figure", "unknown id " + id);
  }

  write_file(out_dir, id + ".csv", to_csv(set));
  write_file(out_dir, "plot_" + id + ".py",
             plot_script(id + ".csv", set.abscissa_name, set.label_keys));

  if (id == "fig4a") {
    json peaks = json::array();
    for (const auto& curve : set.curves) {
      std::vector<double> ts, p1;
      for (const auto& row : curve.rows) {
        ts.push_back(row.abscissa);
        p1.push_back(row.P1);
      }
      const auto peak = find_peak(ts, p1);
      peaks.push_back({{"lambda", curve.labels.at("lambda")},
                       {"peak_location", peak.location},
                       {"peak_height", peak.height}});
    }
    write_file(out_dir, id + "_peaks.json",
               json{{"version", 1}, {"peaks", peaks}}.dump(2) + "\n");
  }
  return 0;
}

int cmd_sweep(const dotwell::ExperimentConfig& cfg, const fs::path& out_dir) {
  using namespace dotwell;
  // collapse study: the configured y grid across the configured bandwidths
  const auto grid = detail::linspace(0.0, cfg.t_max, cfg.n_points);
  CurveSet set;
  set.abscissa_name = "t";
  set.label_keys = {"lambda", "y", "scheme"};
  json metrics = json::array();

  for (double y : cfg.y_values) {
    std::vector<std::pair<double, std::vector<double>>> family;
    auto one = [&](double lambda) {
      return p1_curve_continuous(lambda, lambda / y, grid, cfg.sys.E1,
                                 cfg.sys.E2, cfg.delta);
    };
    const auto curves = detail::parallel_map(cfg.lambdas, one, cfg.workers);
    for (std::size_t k = 0; k < cfg.lambdas.size(); ++k) {
      family.emplace_back(cfg.lambdas[k], curves[k]);
      Curve curve;
      curve.labels = {{"lambda", detail::fmt(cfg.lambdas[k])},
                      {"y", detail::fmt(y)},
                      {"scheme", "continuous"}};
      for (std::size_t t = 0; t < grid.size(); ++t)
        curve.rows.push_back({grid[t], curves[k][t], 0.0, 0.0, 0.0});
      set.curves.push_back(std::move(curve));
    }
    if (family.size() >= 2) {
      const auto m = collapse_metric(family, grid, y);
      metrics.push_back({{"y", y},
                         {"max_pairwise", m.max_pairwise},
                         {"dev_from_analytic", m.dev_from_analytic}});
    }
  }
  write_file(out_dir, "sweep.csv", to_csv(set));
  write_file(out_dir, "collapse_metrics.json",
             json{{"version", 1}, {"metrics", metrics}}.dump(2) + "\n");
  return 0;
}

int cmd_oracle_validate(double lambda, int n, double w, double t_max,
                        double threshold) {
  dotwell::SystemParams sys;
  sys.Lambda = lambda;
  const double dev = dotwell::compare_fictitious(sys, n, w, t_max);
  std::cout << "sup |P1_oracle - P1_fictitious| = " << dev
            << (dev < threshold ? "  (below " : "  (ABOVE ")
            << threshold << ")\n";
  return dev < threshold ? 0 : 1;
}

int cmd_check() {
  int failures = 0;
  for (const auto& r : dotwell::run_acceptance()) {
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail
              << "\n";
    if (!r.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dotwell: electron transfer through a finite-band continuum "
               "under continuous or frequent measurement"};
  app.require_subcommand(1);

  std::string config_path, out_flag = "out", scenario = "custom", mode;
  int workers = 1;
  double lambda = 5.0, y = 1.0, tau = 0.0;

  auto* sim = app.add_subcommand("simulate", "single trajectory from a config");
  sim->add_option("--config", config_path, "JSON config file");
  sim->add_option("--out", out_flag, "output directory");
  sim->add_option("--workers", workers, "worker threads");
  sim->add_option("--lambda", lambda, "bandwidth (units of Gamma)");
  sim->add_option("--y", y, "scaling variable Lambda/Gamma_d");
  sim->add_option("--tau", tau, "measurement interval (frequent mode)");
  sim->add_option("--mode", mode, "continuous | frequent");
  sim->add_option("--scenario", scenario, "scenario tag");

  std::string fig_id;
  auto* fig = app.add_subcommand("figure", "preset scenario -> CSV + plot script");
  fig->add_option("id", fig_id, "fig2a|fig2b|fig2c|fig2d|fig3b|fig4a|fig4b")
      ->required();
  fig->add_option("--out", out_flag, "output directory");
  fig->add_option("--workers", workers, "worker threads");

  auto* sweep = app.add_subcommand("sweep", "collapse study over a custom grid");
  sweep->add_option("--config", config_path, "JSON config file")->required();
  sweep->add_option("--out", out_flag, "output directory");
  sweep->add_option("--workers", workers, "worker threads");

  int oracle_n = 16000;
  double oracle_w = 200.0, oracle_tmax = 10.0, oracle_threshold = 1e-2;
  auto* oracle = app.add_subcommand("oracle-validate",
                                    "discretized-continuum comparison");
  oracle->add_option("--lambda", lambda, "bandwidth (units of Gamma)");
  oracle->add_option("--n", oracle_n, "number of reservoir modes");
  oracle->add_option("--w", oracle_w, "energy window half-width");
  oracle->add_option("--tmax", oracle_tmax, "comparison horizon");
  oracle->add_option("--threshold", oracle_threshold, "pass threshold");

  auto* check = app.add_subcommand("check", "run the acceptance suite");
  (void)check;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const fs::path out_dir = resolve_out_dir(out_flag);
    if (sim->parsed()) {
      dotwell::ExperimentConfig cfg;
      if (!config_path.empty()) cfg = load_config(config_path);
      for (const auto* opt : {"--lambda", "--y", "--tau", "--mode", "--scenario"}) {
        if (!sim->count(opt)) continue;
        if (std::string(opt) == "--lambda") cfg.sys.Lambda = lambda;
        else if (std::string(opt) == "--y") cfg.y_values = {y};
        else if (std::string(opt) == "--tau") cfg.tau = tau;
        else if (std::string(opt) == "--mode") cfg.mode = mode;
        else cfg.scenario = scenario;
      }
      if (sim->count("--workers")) cfg.workers = workers;
      cfg.sys.validate();
      return cmd_simulate(cfg, out_dir);
    }
    if (fig->parsed()) return cmd_figure(fig_id, out_dir, workers);
    if (sweep->parsed()) return cmd_sweep(load_config(config_path), out_dir);
    if (oracle->parsed())
      return cmd_oracle_validate(lambda, oracle_n, oracle_w, oracle_tmax,
                                 oracle_threshold);
    if (check->parsed()) return cmd_check();
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const dotwell::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

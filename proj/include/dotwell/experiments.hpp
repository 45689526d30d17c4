// Figure reproduction and sweep machinery: scenario presets, curve
// containers, CSV/JSON serialization, the scaling-collapse metric and
// peak finding. Everything is deterministic; repeated runs emit identical
// bytes.

#pragma once

#include "dotwell/analytic.hpp"
#include "dotwell/liouvillian.hpp"
#include "dotwell/measurement.hpp"
#include "dotwell/model.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <map>
#include <string>
#include <vector>

namespace dotwell {

struct CurveRow {
  double abscissa;
  double P1, P2, PR, Pleaked;
};

// One labeled series; labels are small key/value tags such as
// {"y","1"},{"scheme","continuous"}.
struct Curve {
  std::map<std::string, std::string> labels;
  std::vector<CurveRow> rows;
};

struct CurveSet {
  std::string abscissa_name = "t";
  std::vector<std::string> label_keys;  // column order after the abscissa
  std::vector<Curve> curves;
};

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k)
    out[k] = a + (b - a) * static_cast<double>(k) / (n - 1);
  return out;
}

inline std::vector<double> logspace(double a, double b, int n) {
  std::vector<double> out(n);
  const double la = std::log10(a), lb = std::log10(b);
  for (int k = 0; k < n; ++k)
    out[k] = std::pow(10.0, la + (lb - la) * static_cast<double>(k) / (n - 1));
  return out;
}

// Ordered parallel map: results come back in input order regardless of the
// worker count, so downstream output bytes are reproducible.
template <typename In, typename Fn>
auto parallel_map(const std::vector<In>& inputs, Fn fn, int workers)
    -> std::vector<decltype(fn(inputs.front()))> {
  using Out = decltype(fn(inputs.front()));
  std::vector<Out> out(inputs.size());
  if (workers <= 1 || inputs.size() <= 1) {
    for (std::size_t k = 0; k < inputs.size(); ++k) out[k] = fn(inputs[k]);
    return out;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= inputs.size()) return;
      out[k] = fn(inputs[k]);
    }
  };
  std::vector<std::future<void>> pool;
  const int n = std::min<int>(workers, static_cast<int>(inputs.size()));
  for (int w = 0; w < n; ++w)
    pool.push_back(std::async(std::launch::async, worker));
  for (auto& f : pool) f.get();
  return out;
}

}  // namespace detail

// CSV with header <abscissa>,<label keys...>,P1,P2,PR,Pleaked.
inline std::string to_csv(const CurveSet& set) {
  std::string out = set.abscissa_name;
  for (const auto& key : set.label_keys) out += "," + key;
  out += ",P1,P2,PR,Pleaked\n";
  for (const auto& curve : set.curves) {
    for (const auto& row : curve.rows) {
      out += detail::fmt(row.abscissa);
      for (const auto& key : set.label_keys) out += "," + curve.labels.at(key);
      out += "," + detail::fmt(row.P1) + "," + detail::fmt(row.P2) + "," +
             detail::fmt(row.PR) + "," + detail::fmt(row.Pleaked) + "\n";
    }
  }
  return out;
}

// Row-major list of 9 (re, im) pairs, the fixed wire format for states.
inline nlohmann::json density_matrix_to_json(const DensityMatrix& rho) {
  nlohmann::json out = nlohmann::json::array();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      out.push_back({rho.m(i, j).real(), rho.m(i, j).imag()});
  return out;
}

// ---------------------------------------------------------------------------
// Scenario presets (figure captions), in units of Gamma = Gamma1 = Gamma2.

struct ExperimentConfig {
  std::string scenario = "custom";
  SystemParams sys;
  double delta = 0.0;              // detector asymmetry
  std::vector<double> y_values = {1.0, 0.1, 0.01};
  std::vector<double> lambdas = {5.0};
  double t_max = 20.0;
  int n_points = 400;
  double t0 = 20.0;                // fig3b readout moment
  double tau = 0.0;                // frequent-measurement interval (custom)
  std::string mode = "continuous"; // continuous | frequent
  int workers = 1;

  static constexpr int kSchemaVersion = 1;

  static ExperimentConfig from_json(const nlohmann::json& j) {
    if (j.value("version", kSchemaVersion) != kSchemaVersion)
      throw std::runtime_error("ExperimentConfig: unsupported schema version");
    ExperimentConfig c;
    c.scenario = j.value("scenario", c.scenario);
    c.sys.E1 = j.value("E1", c.sys.E1);
    c.sys.E2 = j.value("E2", c.sys.E2);
    c.sys.ER = j.value("ER", c.sys.ER);
    c.sys.Gamma1 = j.value("Gamma1", c.sys.Gamma1);
    c.sys.Gamma2 = j.value("Gamma2", c.sys.Gamma2);
    c.sys.Lambda = j.value("Lambda", c.sys.Lambda);
    c.delta = j.value("delta", c.delta);
    if (j.contains("y_values"))
      c.y_values = j.at("y_values").get<std::vector<double>>();
    if (j.contains("lambdas"))
      c.lambdas = j.at("lambdas").get<std::vector<double>>();
    c.t_max = j.value("t_max", c.t_max);
    c.n_points = j.value("n_points", c.n_points);
    c.t0 = j.value("t0", c.t0);
    c.tau = j.value("tau", c.tau);
    c.mode = j.value("mode", c.mode);
    c.workers = j.value("workers", c.workers);
    c.sys.validate();
    return c;
  }

  nlohmann::json to_json() const {
    return {{"version", kSchemaVersion}, {"scenario", scenario},
            {"E1", sys.E1},             {"E2", sys.E2},
            {"ER", sys.ER},             {"Gamma1", sys.Gamma1},
            {"Gamma2", sys.Gamma2},     {"Lambda", sys.Lambda},
            {"delta", delta},           {"y_values", y_values},
            {"lambdas", lambdas},       {"t_max", t_max},
            {"n_points", n_points},     {"t0", t0},
            {"tau", tau},               {"mode", mode},
            {"workers", workers}};
  }
};

// Caption presets for Fig. 2(a)-(d): level alignment and detector symmetry.
inline ExperimentConfig fig2_preset(char variant) {
  ExperimentConfig c;
  c.scenario = std::string("fig2") + variant;
  c.sys.Lambda = 5.0;
  c.y_values = {1.0, 0.1, 0.01};
  c.t_max = 20.0;
  switch (variant) {
    case 'a': break;
    case 'b': c.sys.E1 = 0.05; c.sys.E2 = -0.05; break;
    case 'c': c.delta = 0.2; break;
    case 'd': c.sys.E1 = 0.05; c.sys.E2 = -0.05; c.delta = 0.2; break;
    default: throw std::domain_error("fig2_preset: variant must be a..d");
  }
  return c;
}

// Continuous-monitoring occupation curves of Fig. 2, one curve per y, plus
// the analytic limit law in variant (a).
inline CurveSet run_fig2(char variant, const std::vector<double>& y_values,
                         double lambda = 5.0, int n_points = 400,
                         double t_max = 20.0, int workers = 1) {
  ExperimentConfig preset = fig2_preset(variant);
  preset.sys.Lambda = lambda;
  const auto grid = detail::linspace(0.0, t_max, n_points);
  const DensityMatrix rho0 = pure_state(Vector3c(1, 0, 0));

  auto point = [&](double y) {
    const double gd = lambda / y;
    const DetectorParams det = DetectorParams::from_average(gd, preset.delta);
    const Liouvillian l(preset.sys, det);
    const auto traj = evolve(rho0, l, grid);
    Curve curve;
    curve.labels = {{"y", detail::fmt(y)}, {"scheme", "continuous"}};
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto occ = occupations(traj[k]);
      curve.rows.push_back({grid[k], occ.P1, occ.P2, occ.PR, occ.Pleaked});
    }
    return curve;
  };

  CurveSet set;
  set.abscissa_name = "t";
  set.label_keys = {"y", "scheme"};
  set.curves = detail::parallel_map(y_values, point, workers);
  if (variant == 'a') {
    for (double y : y_values) {
      const double a = alpha_continuous(y);
      Curve curve;
      curve.labels = {{"y", detail::fmt(y)}, {"scheme", "analytic"}};
      for (double t : grid) {
        const double p1 = p1_survival(t, 1.0, a);
        curve.rows.push_back({t, p1, p1, 0.0, 1.0 - 2.0 * p1});
      }
      set.curves.push_back(std::move(curve));
    }
  }
  return set;
}

namespace detail {

// Frequent-measurement occupations at the readout moment t0: complete
// measurement steps of length tau, then a free-evolution remainder (the
// final projective dot readout itself does not change P1, P2).
inline Occupations frequent_occupations_at(const SystemParams& sys, double tau,
                                           double t0) {
  const int n = static_cast<int>(std::floor(t0 / tau + 1e-9));
  DensityMatrix rho = pure_state(Vector3c(1, 0, 0));
  const Liouvillian l(sys, DetectorParams{});
  if (n >= 1) {
    MeasurementSchedule sched{tau, n, MeasureMode::NonSelective};
    rho = run_frequent(rho, sys, sched).states.back();
  }
  const double rem = t0 - n * tau;
  if (rem > 1e-12) {
    rho = DensityMatrix(unvec(l.propagator(rem) * vec(rho.m)));
    rho.symmetrize();
  }
  return occupations(rho);
}

}  // namespace detail

// Fig. 3(b): P1, P2 at the readout moment t0 versus Gamma_d / Lambda, for
// aligned and misaligned levels, continuous monitoring overlaid with the
// frequent-measurement scheme at tau = 4 / Gamma_d.
inline CurveSet run_fig3b(double t0 = 20.0, double lambda = 5.0,
                          std::vector<double> gd_over_lambda = {},
                          int workers = 1) {
  if (gd_over_lambda.empty())
    gd_over_lambda = detail::logspace(0.05, 20.0, 25);

  CurveSet set;
  set.abscissa_name = "gd_over_lambda";
  set.label_keys = {"levels", "scheme"};

  for (const bool misaligned : {false, true}) {
    SystemParams sys;
    sys.Lambda = lambda;
    if (misaligned) {
      sys.E1 = 0.05;
      sys.E2 = -0.05;
    }
    const std::string levels = misaligned ? "misaligned" : "aligned";

    auto point = [&](double ratio) {
      const double gd = ratio * lambda;
      const Liouvillian l(sys, DetectorParams(gd, gd));
      const auto occ_c =
          occupations(evolve(pure_state(Vector3c(1, 0, 0)), l, {t0}).front());
      const auto occ_f = detail::frequent_occupations_at(
          sys, tau_from_gamma_d(gd, TauRegime::SmallX), t0);
      return std::pair{occ_c, occ_f};
    };
    const auto results = detail::parallel_map(gd_over_lambda, point, workers);

    Curve cont, freq;
    cont.labels = {{"levels", levels}, {"scheme", "continuous"}};
    freq.labels = {{"levels", levels}, {"scheme", "frequent"}};
    for (std::size_t k = 0; k < gd_over_lambda.size(); ++k) {
      const auto& [oc, of] = results[k];
      cont.rows.push_back({gd_over_lambda[k], oc.P1, oc.P2, oc.PR, oc.Pleaked});
      freq.rows.push_back({gd_over_lambda[k], of.P1, of.P2, of.PR, of.Pleaked});
    }
    set.curves.push_back(std::move(cont));
    set.curves.push_back(std::move(freq));
  }
  return set;
}

struct PeakInfo {
  double location = 0.0;
  double height = 0.0;
};

// Grid scan plus three-point parabolic refinement.
inline PeakInfo find_peak(const std::vector<double>& xs,
                          const std::vector<double>& ys) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < ys.size(); ++k)
    if (ys[k] > ys[best]) best = k;
  PeakInfo peak{xs[best], ys[best]};
  if (best > 0 && best + 1 < ys.size()) {
    const double denom = ys[best - 1] - 2.0 * ys[best] + ys[best + 1];
    if (denom < 0.0) {
      const double h = xs[best + 1] - xs[best];
      const double s = 0.5 * (ys[best - 1] - ys[best + 1]) / denom;
      peak.location = xs[best] + s * h;
      peak.height = ys[best] - 0.25 * (ys[best - 1] - ys[best + 1]) * s;
    }
  }
  return peak;
}

// Fig. 4 return-effect curves under free evolution (detector off), one
// curve per bandwidth. Variant a starts in the well, b in the upper dot.
inline CurveSet run_fig4(char variant, const std::vector<double>& lambdas = {2.5, 5.0, 10.0},
                         double t_max = 2.0, int n_points = 401, int workers = 1) {
  if (variant != 'a' && variant != 'b')
    throw std::domain_error("run_fig4: variant must be a or b");
  const auto grid = detail::linspace(0.0, t_max, n_points);
  const Vector3c amp = variant == 'a' ? Vector3c(0, 0, 1) : Vector3c(1, 0, 0);

  auto point = [&](double lambda) {
    SystemParams sys;
    sys.Lambda = lambda;
    const Liouvillian l(sys, DetectorParams{});
    const auto traj = evolve(pure_state(amp), l, grid);
    Curve curve;
    curve.labels = {{"lambda", detail::fmt(lambda)}, {"scheme", "continuous"}};
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto occ = occupations(traj[k]);
      curve.rows.push_back({grid[k], occ.P1, occ.P2, occ.PR, occ.Pleaked});
    }
    return curve;
  };

  CurveSet set;
  set.abscissa_name = "t";
  set.label_keys = {"lambda", "scheme"};
  set.curves = detail::parallel_map(lambdas, point, workers);
  return set;
}

struct CollapseMetric {
  double max_pairwise = 0.0;      // worst sup-norm gap inside the family
  double dev_from_analytic = 0.0; // largest-Lambda curve vs the limit law
};

// Quantifies the Fig. 2 collapse claim for a family of P1(t) curves sharing
// a time grid at fixed y but different Lambda.
inline CollapseMetric collapse_metric(
    const std::vector<std::pair<double, std::vector<double>>>& lambda_curves,
    const std::vector<double>& t_grid, double y) {
  if (lambda_curves.size() < 2)
    throw std::domain_error("collapse_metric: need at least two curves");
  for (const auto& [lambda, p1] : lambda_curves)
    if (p1.size() != t_grid.size())
      throw std::runtime_error("collapse_metric: curve/grid size mismatch");

  CollapseMetric metric;
  for (std::size_t a = 0; a < lambda_curves.size(); ++a)
    for (std::size_t b = a + 1; b < lambda_curves.size(); ++b)
      for (std::size_t k = 0; k < t_grid.size(); ++k)
        metric.max_pairwise =
            std::max(metric.max_pairwise,
                     std::abs(lambda_curves[a].second[k] - lambda_curves[b].second[k]));

  const auto largest = std::max_element(
      lambda_curves.begin(), lambda_curves.end(),
      [](const auto& a, const auto& b) { return a.first < b.first; });
  const double alpha = alpha_continuous(y);
  for (std::size_t k = 0; k < t_grid.size(); ++k)
    metric.dev_from_analytic =
        std::max(metric.dev_from_analytic,
                 std::abs(largest->second[k] - p1_survival(t_grid[k], 1.0, alpha)));
  return metric;
}

// Helper used by criteria and tests: P1(t) under continuous monitoring of
// the symmetric configuration.
inline std::vector<double> p1_curve_continuous(double lambda, double gd,
                                               const std::vector<double>& grid,
                                               double e1 = 0.0, double e2 = 0.0,
                                               double delta = 0.0) {
  SystemParams sys;
  sys.Lambda = lambda;
  sys.E1 = e1;
  sys.E2 = e2;
  const Liouvillian l(sys, DetectorParams::from_average(gd, delta));
  const auto traj = evolve(pure_state(Vector3c(1, 0, 0)), l, grid);
  std::vector<double> p1(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) p1[k] = traj[k].m(0, 0).real();
  return p1;
}

}  // namespace dotwell

// Copyright 2026 The qtraj Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "qtraj/commands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "qtraj/config.hpp"
#include "qtraj/errors.hpp"
#include "qtraj/io.hpp"
#include "qtraj/lindblad.hpp"
#include "qtraj/spectrum.hpp"
#include "qtraj/stats.hpp"
#include "qtraj/trajectory.hpp"

namespace qtraj {

using nlohmann::json;

namespace {

constexpr double kBoundTolerance = 1e-9;
constexpr std::size_t kChunk = 256;

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

RunConfig require_config(const CommandOptions& opt) {
  if (!opt.config_path) throw ConfigError("--config: a configuration file is required");
  return load_config(*opt.config_path);
}

std::string output_dir(const CommandOptions& opt, const RunConfig* cfg) {
  if (opt.out_dir) return *opt.out_dir;
  return cfg != nullptr ? cfg->output_dir : std::string("out");
}

json params_json(const TwoLevelParams& p) {
  return {{"gamma", p.gamma}, {"p", p.p},         {"nbar", p.nbar},
          {"kd", p.kd},       {"Omega", p.Omega}, {"DeltaNu", p.DeltaNu},
          {"nu", p.nu},       {"nu_lo", p.nu_lo}};
}

// Bloch components Tr(s sigma_i) of a 2x2 operator; NaN for other dimensions.
std::array<double, 3> bloch_of(const CMatrix& s) {
  if (s.rows() != 2) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan, nan};
  }
  return {2.0 * s(1, 0).real(), 2.0 * s(1, 0).imag(), (s(0, 0) - s(1, 1)).real()};
}

void write_outputs(const std::string& dir,
                   const std::vector<std::pair<std::string, std::string>>& files,
                   std::ostream& log) {
  for (const auto& [name, content] : files) {
    const std::string path = join(dir, name);
    write_file(path, content);
    log << "wrote " << path << '\n';
  }
}

EnsembleSpec ensemble_spec(const RunConfig& cfg, std::uint64_t seed) {
  EnsembleSpec spec;
  spec.model = cfg.model;
  spec.grid = *cfg.grid;
  spec.rho0 = cfg.rho0;
  if (cfg.psi0) spec.psi0 = *cfg.psi0;
  spec.seed = seed;
  spec.n_traj = cfg.ensemble->n_traj;
  spec.measure = cfg.ensemble->measure;
  spec.equation = cfg.ensemble->equation;
  if (cfg.ensemble->drive_orthogonal) spec.ell = drive_orthogonal_phases(cfg.model);
  return spec;
}

// Running sums over fixed-size chunks of trajectories, reduced in chunk order.
struct Moments {
  std::vector<double> sum, sum_sq;
  explicit Moments(std::size_t n) : sum(n, 0.0), sum_sq(n, 0.0) {}
};

Estimate finish_moment(double s, double s2, double n) {
  const double mean = s / n;
  if (n < 2) return {mean, 0.0};
  const double var = std::max(0.0, (s2 - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n)};
}

}  // namespace

int cmd_trajectories(const CommandOptions& opt, std::ostream& log) {
  const RunConfig cfg = require_config(opt);
  if (!cfg.grid) throw ConfigError("grid: required by the trajectories command");
  if (!cfg.ensemble) throw ConfigError("ensemble: required by the trajectories command");
  const EnsembleConfig& ec = *cfg.ensemble;
  EnsembleSpec spec = ensemble_spec(cfg, resolve_seed(opt.seed, cfg));
  const TimeGrid grid = *cfg.grid;
  for (std::size_t j = 0; j <= grid.n_steps; j += ec.record_stride) spec.probes.sample_steps.push_back(j);
  if (spec.probes.sample_steps.back() != grid.n_steps) spec.probes.sample_steps.push_back(grid.n_steps);
  spec.probes.record_states = true;
  spec.validate();
  const std::string dir = output_dir(opt, &cfg);
  prepare_output_dir(dir);

  const std::vector<std::size_t>& steps = spec.probes.sample_steps;
  const std::size_t ns = steps.size();
  // quantities per sample: weight, then the three Bloch components
  Moments mom(4 * ns);
  std::vector<std::pair<std::string, std::string>> files;

  for (std::size_t first = 0; first < ec.n_traj; first += kChunk) {
    EnsembleSpec chunk = spec;
    chunk.first_stream = first;
    chunk.n_traj = std::min(kChunk, ec.n_traj - first);
    const Ensemble ens = run_ensemble(chunk, opt.threads);
    std::vector<double> col(chunk.n_traj), col_sq(chunk.n_traj);
    for (std::size_t k = 0; k < ns; ++k) {
      for (int q = 0; q < 4; ++q) {
        for (std::size_t i = 0; i < chunk.n_traj; ++i) {
          const TrajectoryRecord& r = ens.records[i];
          double v;
          if (q == 0) {
            v = r.weight_samples[k];
          } else {
            CMatrix s = r.state_samples[k];
            if (spec.measure == Measure::physical) s /= r.weight_samples[k];
            v = bloch_of(s)[q - 1];
          }
          col[i] = v;
          col_sq[i] = v * v;
        }
        mom.sum[4 * k + q] += pairwise_sum(col);
        mom.sum_sq[4 * k + q] += pairwise_sum(col_sq);
      }
    }
    for (std::size_t i = 0; i < chunk.n_traj && first + i < ec.dump; ++i) {
      const TrajectoryRecord& r = ens.records[i];
      CsvTable t({"t", "W1", "weight", "x", "y", "z"});
      for (std::size_t k = 0; k < ns; ++k) {
        const auto b = bloch_of(r.state_samples[k] / r.weight_samples[k]);
        t.add_row({grid.time(steps[k]), r.output_samples[k], r.weight_samples[k], b[0], b[1], b[2]});
      }
      char name[48];
      std::snprintf(name, sizeof name, "trajectory_%05zu.csv", first + i);
      files.emplace_back(name, t.str());
    }
  }

  CsvTable summary({"t", "mean_weight", "se_weight", "x_mean", "y_mean", "z_mean", "x_se", "y_se",
                    "z_se", "x_ref", "y_ref", "z_ref"});
  const double n = static_cast<double>(ec.n_traj);
  CMatrix eta = cfg.rho0;
  double t_prev = 0.0;
  for (std::size_t k = 0; k < ns; ++k) {
    const double t = grid.time(steps[k]);
    eta = propagate(cfg.model, t_prev, t, eta);
    t_prev = t;
    const auto ref = bloch_of(eta);
    std::array<Estimate, 4> e;
    for (int q = 0; q < 4; ++q) e[q] = finish_moment(mom.sum[4 * k + q], mom.sum_sq[4 * k + q], n);
    summary.add_row({t, e[0].mean, e[0].se, e[1].mean, e[2].mean, e[3].mean, e[1].se, e[2].se,
                     e[3].se, ref[0], ref[1], ref[2]});
  }
  files.emplace_back("summary.csv", summary.str());
  json meta = {{"command", "trajectories"},
               {"seed", spec.seed},
               {"n_traj", ec.n_traj},
               {"T", grid.T},
               {"n_steps", grid.n_steps},
               {"record_stride", ec.record_stride},
               {"measure", ec.measure == Measure::physical ? "physical" : "reference"},
               {"equation", ec.equation == Equation::sse ? "sse" : "sme"},
               {"readout_phases", ec.drive_orthogonal ? "drive_orthogonal" : "unit"}};
  files.emplace_back("run.json", meta.dump(2) + "\n");
  write_outputs(dir, files, log);
  return kExitOk;
}

int cmd_spectrum(const CommandOptions& opt, std::ostream& log) {
  const RunConfig cfg = require_config(opt);
  if (!cfg.spectrum) throw ConfigError("spectrum: required by the spectrum command");
  const SpectrumConfig& sc = *cfg.spectrum;
  const Route route = opt.route ? parse_route(*opt.route) : sc.route;
  const std::vector<double> mu = sc.mu.points();
  const bool two_level = cfg.kind == RunConfig::ModelKind::two_level;

  double horizon = kInfiniteHorizon;
  std::uint64_t seed = 0;
  if (route == Route::closed_form) {
    if (!two_level) throw ConfigError("spectrum.route: closed-form needs the two_level model");
    if (cfg.detection == Detection::heterodyne && cfg.params.nu_lo == cfg.params.nu) {
      throw ConfigError("model.nu_lo: heterodyne detection needs nu_lo != nu");
    }
  } else if (route == Route::analytic) {
    if (sc.T) {
      horizon = *sc.T;
    } else if (cfg.grid) {
      horizon = cfg.grid->T;
    } else {
      throw ConfigError("spectrum.T: the analytic route needs a horizon (spectrum.T or grid.T)");
    }
  } else {
    if (!cfg.grid || !cfg.ensemble) {
      throw ConfigError("ensemble: the mc route needs grid and ensemble settings");
    }
    horizon = cfg.grid->T;
    if (sc.T && std::abs(*sc.T - horizon) > 1e-12 * horizon) {
      throw ConfigError("spectrum.T: the mc route uses the grid horizon grid.T");
    }
    seed = resolve_seed(opt.seed, cfg);
    EnsembleSpec probe = ensemble_spec(cfg, seed);
    probe.probes.mu = mu;
    probe.validate();
  }
  const std::string dir = output_dir(opt, &cfg);
  prepare_output_dir(dir);

  std::vector<std::pair<std::string, std::string>> files;
  for (std::size_t i = 0; i < sc.theta.size(); ++i) {
    const double theta = wrap_phase(sc.theta[i]);
    ModelSpec m = cfg.model;
    m.theta = theta;
    SpectrumResult res;
    if (route == Route::closed_form) {
      if (cfg.detection == Detection::homodyne) {
        res = homodyne_spectrum(cfg.params, theta, mu);
      } else {
        res = heterodyne_spectrum(cfg.params, mu);
        res.theta = theta;
      }
    } else if (route == Route::analytic) {
      res = spectrum_analytic(m, cfg.rho0, mu, horizon, opt.threads);
    } else {
      EnsembleSpec spec = ensemble_spec(cfg, seed);
      spec.model = m;
      spec.probes.mu = mu;
      res = spectrum_mc(run_ensemble(spec, opt.threads), horizon);
    }
    json j = spectrum_json(res);
    j["route"] = to_string(route);
    if (two_level) {
      j["model"] = params_json(cfg.params);
      j["detection"] = cfg.detection == Detection::homodyne ? "homodyne" : "heterodyne";
    }
    if (route == Route::mc) {
      j["n_traj"] = cfg.ensemble->n_traj;
      j["seed"] = seed;
    }
    const std::string stem = "spectrum_" + std::to_string(i);
    files.emplace_back(stem + ".csv", spectrum_csv(res));
    files.emplace_back(stem + ".json", j.dump(2) + "\n");
  }
  write_outputs(dir, files, log);
  return kExitOk;
}

int cmd_figures(const CommandOptions& opt, std::ostream& log) {
  std::optional<RunConfig> cfg;
  if (opt.config_path) cfg = load_config(*opt.config_path);
  const std::string which = opt.figure.value_or("all");
  if (which != "fig1" && which != "fig2" && which != "all") {
    throw ConfigError("--figure: expected fig1 or fig2");
  }
  const std::string dir = output_dir(opt, cfg ? &*cfg : nullptr);
  prepare_output_dir(dir);
  std::vector<std::pair<std::string, std::string>> files;

  if (which != "fig2") {
    TwoLevelParams p;
    p.gamma = 1.0;
    p.p = 0.8;
    p.nbar = 0.0;
    p.kd = 0.0;
    p.DeltaNu = 1.4937;
    p.Omega = 1.4360;
    const double theta = -0.1748;
    const std::vector<double> mu = linspace(0.0, 6.0, 601);
    const auto solid = homodyne_spectrum(p, theta, mu).inelastic;
    const auto dashed = homodyne_spectrum(p, theta + kPi / 2, mu).inelastic;
    CsvTable t({"mu", "S_inel_theta", "S_inel_theta_plus_half_pi"});
    for (std::size_t k = 0; k < mu.size(); ++k) t.add_row({mu[k], solid[k], dashed[k]});
    json side = {{"figure", "fig1"},
                 {"parameters",
                  {{"gamma", 1.0}, {"p", 0.8}, {"nbar", 0.0}, {"kd", 0.0},
                   {"DeltaNu", 1.4937}, {"Omega", 1.4360}, {"theta", -0.1748}}},
                 {"mu", {{"min", 0.0}, {"max", 6.0}, {"n", 601}}},
                 {"columns", {"mu", "S_inel_theta", "S_inel_theta_plus_half_pi"}}};
    files.emplace_back("fig1.csv", t.str());
    files.emplace_back("fig1.json", side.dump(2) + "\n");
  }
  if (which != "fig1") {
    TwoLevelParams p;
    p.gamma = 1.0;
    p.DeltaNu = 1.5;
    p.Omega = 8.0;
    p.nbar = 0.01;
    p.kd = 0.7;
    const std::vector<double> v = linspace(-12.0, 12.0, 961);
    const FluorescenceSpectrum f = fluorescence_spectrum(p, v);
    CsvTable t({"mu", "Sigma_inel"});
    for (std::size_t k = 0; k < v.size(); ++k) t.add_row({v[k], f.inelastic[k]});
    json side = {{"figure", "fig2"},
                 {"parameters",
                  {{"gamma", 1.0}, {"DeltaNu", 1.5}, {"Omega", 8.0}, {"nbar", 0.01}, {"kd", 0.7}}},
                 {"mu", {{"min", -12.0}, {"max", 12.0}, {"n", 961}}},
                 {"elastic_coefficient", f.elastic_coefficient},
                 {"columns", {"mu", "Sigma_inel"}}};
    files.emplace_back("fig2.csv", t.str());
    files.emplace_back("fig2.json", side.dump(2) + "\n");
  }
  write_outputs(dir, files, log);
  return kExitOk;
}

int cmd_bounds(const CommandOptions& opt, std::ostream& log) {
  const RunConfig cfg = require_config(opt);
  if (!cfg.bounds) throw ConfigError("bounds: required by the bounds command");
  const BoundsConfig& bc = *cfg.bounds;
  const bool two_level = cfg.kind == RunConfig::ModelKind::two_level;
  const Route route = bc.route.value_or(two_level ? Route::closed_form : Route::analytic);
  if (route == Route::closed_form && !two_level) {
    throw ConfigError("bounds.route: closed-form needs the two_level model");
  }
  double horizon = kInfiniteHorizon;
  if (route == Route::analytic) {
    if (bc.T) {
      horizon = *bc.T;
    } else if (cfg.grid) {
      horizon = cfg.grid->T;
    } else {
      throw ConfigError("bounds.T: the analytic route needs a horizon (bounds.T or grid.T)");
    }
  }
  const std::vector<double> mu = bc.mu.points();
  const std::string dir = output_dir(opt, &cfg);
  prepare_output_dir(dir);

  double worst = std::numeric_limits<double>::infinity();
  json reports = json::array();
  for (double th : bc.theta) {
    const double theta = wrap_phase(th);
    BoundsReport rep;
    if (route == Route::closed_form) {
      rep = check_uncertainty_bounds(cfg.params, theta, mu, bc.theta);
    } else {
      ModelSpec m = cfg.model;
      m.theta = theta;
      rep = check_uncertainty_bounds(m, cfg.rho0, mu, horizon, bc.theta, opt.threads);
    }
    worst = std::min({worst, rep.min_product_margin, rep.min_mean_margin});
    reports.push_back(bounds_json(rep));
  }

  json sweep = json::array();
  if (bc.sweep) {
    for (const SweepPoint& sp : random_parameter_sweep(bc.sweep->n_sets, bc.sweep->seed)) {
      const BoundsReport rep = check_uncertainty_bounds(sp.params, sp.theta, mu);
      const auto het = heterodyne_spectrum(sp.params, mu).inelastic;
      const double het_margin = *std::min_element(het.begin(), het.end()) - 1.0;
      worst = std::min({worst, rep.min_product_margin, rep.min_mean_margin, het_margin});
      sweep.push_back({{"params", params_json(sp.params)},
                       {"theta", sp.theta},
                       {"min_product_margin", rep.min_product_margin},
                       {"min_mean_margin", rep.min_mean_margin},
                       {"heterodyne_min_margin", het_margin}});
    }
  }
  const bool ok = worst >= -kBoundTolerance;
  json out = {{"route", to_string(route)},
              {"T", std::isfinite(horizon) ? json(horizon) : json("inf")},
              {"reports", reports},
              {"sweep", sweep},
              {"worst_margin", worst},
              {"tolerance", kBoundTolerance},
              {"satisfied", ok}};
  write_outputs(dir, {{"bounds.json", out.dump(2) + "\n"}}, log);
  if (!ok) {
    log << "bound violated: worst margin " << format_double(worst) << '\n';
    return kExitBoundViolation;
  }
  return kExitOk;
}

int run_command(const std::string& command, const CommandOptions& opt, std::ostream& log,
                std::ostream& err) {
  try {
    if (command == "trajectories") return cmd_trajectories(opt, log);
    if (command == "spectrum") return cmd_spectrum(opt, log);
    if (command == "figures") return cmd_figures(opt, log);
    if (command == "bounds") return cmd_bounds(opt, log);
    err << "error: unknown command " << command << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParameterError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ArgumentError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DimensionError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace qtraj

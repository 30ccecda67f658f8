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


#include "qtraj/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <set>

#include "qtraj/errors.hpp"
#include "qtraj/io.hpp"
#include "qtraj/lindblad.hpp"
#include "qtraj/spectrum.hpp"

namespace qtraj {

using nlohmann::json;

namespace {

// Object reader that remembers which keys were consumed.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  [[noreturn]] static void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key) {
    if (!has(key)) fail(at(key), "required field is missing");
    used_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) fail(at(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(at(key), "must be finite");
    return x;
  }

  double number(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  std::uint64_t unsigned_int(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      fail(at(key), "expected a nonnegative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::string string(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) fail(at(key), "expected a string");
    return v.get<std::string>();
  }

  Section object(const std::string& key) { return Section(raw(key), at(key)); }

  /// Rejects keys that were never read.
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.count(it.key())) fail(at(it.key()), "unknown key");
    }
  }

  const std::string& path() const { return path_; }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

Complex parse_complex(const json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  Section::fail(where, "expected a number or a [re, im] pair");
}

CMatrix parse_matrix(const json& v, int dim, const std::string& where) {
  if (!v.is_array() || static_cast<int>(v.size()) != dim) {
    Section::fail(where, "expected " + std::to_string(dim) + " rows");
  }
  CMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const json& row = v[r];
    if (!row.is_array() || static_cast<int>(row.size()) != dim) {
      Section::fail(where, "row " + std::to_string(r) + " must have " + std::to_string(dim) +
                               " entries");
    }
    for (int c = 0; c < dim; ++c) m(r, c) = parse_complex(row[c], where);
  }
  if (!all_finite(m)) Section::fail(where, "non-finite entries");
  return m;
}

CVector parse_vector(const json& v, int dim, const std::string& where) {
  if (!v.is_array() || static_cast<int>(v.size()) != dim) {
    Section::fail(where, "expected " + std::to_string(dim) + " entries");
  }
  CVector x(dim);
  for (int i = 0; i < dim; ++i) x(i) = parse_complex(v[i], where);
  return x;
}

std::vector<double> parse_number_list(const json& v, const std::string& where) {
  std::vector<double> out;
  if (v.is_number()) {
    out.push_back(v.get<double>());
  } else if (v.is_array()) {
    for (const auto& e : v) {
      if (!e.is_number()) Section::fail(where, "expected numbers");
      out.push_back(e.get<double>());
    }
  } else {
    Section::fail(where, "expected a number or a list of numbers");
  }
  for (double x : out) {
    if (!std::isfinite(x)) Section::fail(where, "must be finite");
  }
  return out;
}

WaveSpec parse_wave(Section s) {
  const std::string kind = s.string("kind");
  WaveSpec w;
  if (kind == "zero") {
    w = WaveSpec::zero();
  } else if (kind == "monochromatic") {
    const Complex a = parse_complex(s.raw("amplitude"), s.at("amplitude"));
    w = WaveSpec::monochromatic(a, s.number("frequency", 0.0));
  } else {
    Section::fail(s.at("kind"), "expected \"zero\" or \"monochromatic\"");
  }
  s.finish();
  return w;
}

MuGrid parse_mu_grid(Section& s) {
  MuGrid g;
  g.min = s.number("mu_min");
  g.max = s.number("mu_max");
  g.n = s.unsigned_int("n_mu");
  if (g.n < 1) Section::fail(s.at("n_mu"), "must be at least 1");
  if (g.max < g.min) Section::fail(s.at("mu_max"), "must not be below mu_min");
  if (g.n == 1 && g.max != g.min) Section::fail(s.at("n_mu"), "one point needs mu_min == mu_max");
  return g;
}

double positive(Section& s, const std::string& key) {
  const double x = s.number(key);
  if (!(x > 0.0)) Section::fail(s.at(key), "must be positive");
  return x;
}

void parse_model(RunConfig& cfg, Section s) {
  const std::string kind = s.string("kind");
  if (kind == "two_level") {
    cfg.kind = RunConfig::ModelKind::two_level;
    TwoLevelParams& p = cfg.params;
    p.gamma = s.number("gamma", p.gamma);
    p.p = s.number("p", p.p);
    p.nbar = s.number("nbar", p.nbar);
    p.kd = s.number("kd", p.kd);
    p.Omega = s.number("Omega", p.Omega);
    p.DeltaNu = s.number("DeltaNu", p.DeltaNu);
    p.nu = s.number("nu", p.nu);
    p.nu_lo = s.number("nu_lo", p.nu_lo);
    const double theta = s.number("theta", 0.0);
    if (s.has("detection")) {
      const std::string d = s.string("detection");
      if (d == "homodyne") {
        cfg.detection = Detection::homodyne;
      } else if (d == "heterodyne") {
        cfg.detection = Detection::heterodyne;
      } else {
        Section::fail(s.at("detection"), "expected \"homodyne\" or \"heterodyne\"");
      }
    }
    s.finish();
    p.validate();
    cfg.model = build_two_level_model(p, cfg.detection, wrap_phase(theta));
  } else if (kind == "generic") {
    cfg.kind = RunConfig::ModelKind::generic;
    const std::uint64_t dim = s.unsigned_int("dim");
    if (dim < 1 || dim > static_cast<std::uint64_t>(kMaxDim)) {
      Section::fail(s.at("dim"), "must lie in [1, 4]");
    }
    ModelSpec& m = cfg.model;
    m.dim = static_cast<int>(dim);
    m.H0 = s.has("H0") ? parse_matrix(s.raw("H0"), m.dim, s.at("H0"))
                       : CMatrix::Zero(m.dim, m.dim);
    const json& chans = s.raw("channels");
    if (!chans.is_array() || chans.empty()) {
      Section::fail(s.at("channels"), "expected a nonempty list");
    }
    for (std::size_t k = 0; k < chans.size(); ++k) {
      Section c(chans[k], s.at("channels") + "[" + std::to_string(k) + "]");
      Channel ch;
      ch.R = parse_matrix(c.raw("R"), m.dim, c.at("R"));
      ch.wave = c.has("wave") ? parse_wave(c.object("wave")) : WaveSpec::zero();
      c.finish();
      m.channels.push_back(ch);
    }
    m.theta = wrap_phase(s.number("theta", 0.0));
    if (s.has("lo")) {
      Section lo = s.object("lo");
      const Complex a = lo.has("amplitude") ? parse_complex(lo.raw("amplitude"), lo.at("amplitude"))
                                            : Complex{1.0, 0.0};
      m.lo = WaveSpec::monochromatic(a, lo.number("frequency", 0.0));
      lo.finish();
    }
    s.finish();
  } else {
    Section::fail(s.at("kind"), "expected \"two_level\" or \"generic\"");
  }
  cfg.model.validate();
}

void parse_initial_state(RunConfig& cfg, const json* node) {
  const int dim = cfg.model.dim;
  const std::string where = "initial_state";
  if (node == nullptr) {
    if (cfg.kind != RunConfig::ModelKind::two_level) {
      Section::fail(where, "required for generic models");
    }
    cfg.psi0 = CVector::Unit(2, 1);
    cfg.rho0 = pauli::ground();
    return;
  }
  if (node->is_string()) {
    const std::string name = node->get<std::string>();
    if (cfg.kind != RunConfig::ModelKind::two_level) {
      Section::fail(where, "named states need the two_level model");
    }
    if (name == "ground") {
      cfg.psi0 = CVector::Unit(2, 1);
      cfg.rho0 = pauli::ground();
    } else if (name == "excited") {
      cfg.psi0 = CVector::Unit(2, 0);
      cfg.rho0 = pauli::excited();
    } else if (name == "equilibrium") {
      cfg.rho0 = equilibrium_state(cfg.params, 0.0);
    } else {
      Section::fail(where, "expected \"ground\", \"excited\" or \"equilibrium\"");
    }
    return;
  }
  Section s(*node, where);
  if (s.has("vector")) {
    CVector v = parse_vector(s.raw("vector"), dim, s.at("vector"));
    const double nrm = v.norm();
    if (!(std::abs(nrm - 1.0) <= 1e-9)) Section::fail(s.at("vector"), "must have unit norm");
    v /= nrm;
    cfg.psi0 = v;
    cfg.rho0 = v * v.adjoint();
  } else if (s.has("density")) {
    cfg.rho0 = parse_matrix(s.raw("density"), dim, s.at("density"));
    try {
      require_density_matrix(cfg.rho0, dim, "initial_state.density");
    } catch (const ArgumentError& e) {
      throw ConfigError(e.what());
    }
  } else {
    Section::fail(where, "expected a \"vector\" or a \"density\" entry");
  }
  s.finish();
}

}  // namespace

std::vector<double> MuGrid::points() const { return linspace(min, max, n); }

Route parse_route(const std::string& name) {
  if (name == "closed-form") return Route::closed_form;
  if (name == "analytic") return Route::analytic;
  if (name == "mc") return Route::mc;
  throw ConfigError("spectrum.route: expected \"closed-form\", \"analytic\" or \"mc\"");
}

std::string to_string(Route r) {
  switch (r) {
    case Route::closed_form: return "closed-form";
    case Route::analytic: return "analytic";
    case Route::mc: return "mc";
  }
  return "unknown";
}

RunConfig parse_config(const json& j) {
  Section top(j, "");
  const std::uint64_t version = top.unsigned_int("schema_version");
  if (version != kSchemaVersion) Section::fail("schema_version", "unsupported version");
  if (top.has("units") && top.string("units") != "gamma") {
    Section::fail("units", "only \"gamma\" is supported");
  }

  RunConfig cfg;
  parse_model(cfg, top.object("model"));
  parse_initial_state(cfg, top.has("initial_state") ? &top.raw("initial_state") : nullptr);

  if (top.has("grid")) {
    Section g = top.object("grid");
    TimeGrid grid;
    grid.T = positive(g, "T");
    grid.n_steps = g.unsigned_int("n_steps");
    if (grid.n_steps < 1) Section::fail(g.at("n_steps"), "must be at least 1");
    g.finish();
    cfg.grid = grid;
  }

  if (top.has("ensemble")) {
    Section e = top.object("ensemble");
    EnsembleConfig ec;
    ec.n_traj = e.unsigned_int("n_traj");
    if (ec.n_traj < 1) Section::fail(e.at("n_traj"), "must be at least 1");
    if (e.has("master_seed")) ec.master_seed = e.unsigned_int("master_seed");
    if (e.has("measure")) {
      const std::string m = e.string("measure");
      if (m == "reference") {
        ec.measure = Measure::reference;
      } else if (m == "physical") {
        ec.measure = Measure::physical;
      } else {
        Section::fail(e.at("measure"), "expected \"reference\" or \"physical\"");
      }
    }
    if (e.has("equation")) {
      const std::string q = e.string("equation");
      if (q == "sme") {
        ec.equation = Equation::sme;
      } else if (q == "sse") {
        ec.equation = Equation::sse;
      } else {
        Section::fail(e.at("equation"), "expected \"sme\" or \"sse\"");
      }
    }
    if (e.has("readout_phases")) {
      const std::string r = e.string("readout_phases");
      if (r == "drive_orthogonal") {
        ec.drive_orthogonal = true;
      } else if (r != "unit") {
        Section::fail(e.at("readout_phases"), "expected \"unit\" or \"drive_orthogonal\"");
      }
    }
    if (e.has("record_stride")) {
      ec.record_stride = e.unsigned_int("record_stride");
      if (ec.record_stride < 1) Section::fail(e.at("record_stride"), "must be at least 1");
    }
    ec.dump = e.has("dump") ? e.unsigned_int("dump") : std::min<std::size_t>(ec.n_traj, 10);
    if (ec.dump > ec.n_traj) Section::fail(e.at("dump"), "cannot exceed n_traj");
    e.finish();
    if (ec.equation == Equation::sse) {
      if (!cfg.psi0) Section::fail("initial_state", "the sse equation needs a pure initial state");
      if (ec.measure == Measure::physical) {
        Section::fail("ensemble.measure", "physical sampling needs the sme equation");
      }
    }
    if (!cfg.grid) Section::fail("grid", "required when an ensemble is configured");
    if (ec.record_stride > cfg.grid->n_steps) {
      Section::fail("ensemble.record_stride", "exceeds grid.n_steps");
    }
    cfg.ensemble = ec;
  }

  if (top.has("spectrum")) {
    Section s = top.object("spectrum");
    SpectrumConfig sc;
    if (s.has("route")) {
      try {
        sc.route = parse_route(s.string("route"));
      } catch (const ConfigError&) {
        Section::fail("spectrum.route", "expected \"closed-form\", \"analytic\" or \"mc\"");
      }
    }
    sc.mu = parse_mu_grid(s);
    sc.theta = s.has("theta") ? parse_number_list(s.raw("theta"), s.at("theta"))
                              : std::vector<double>{cfg.model.theta};
    if (sc.theta.empty()) Section::fail(s.at("theta"), "needs at least one phase");
    if (s.has("T")) sc.T = positive(s, "T");
    s.finish();
    cfg.spectrum = sc;
  }

  if (top.has("bounds")) {
    Section b = top.object("bounds");
    BoundsConfig bc;
    if (b.has("route")) {
      const std::string r = b.string("route");
      if (r == "closed-form") {
        bc.route = Route::closed_form;
      } else if (r == "analytic") {
        bc.route = Route::analytic;
      } else {
        Section::fail(b.at("route"), "expected \"closed-form\" or \"analytic\"");
      }
    }
    bc.mu = parse_mu_grid(b);
    bc.theta = b.has("theta") ? parse_number_list(b.raw("theta"), b.at("theta"))
                              : std::vector<double>{cfg.model.theta};
    if (bc.theta.empty()) Section::fail(b.at("theta"), "needs at least one phase");
    if (b.has("sweep")) {
      Section w = b.object("sweep");
      SweepConfig sw;
      sw.n_sets = w.unsigned_int("n_sets");
      sw.seed = w.has("seed") ? w.unsigned_int("seed") : 0;
      w.finish();
      bc.sweep = sw;
    }
    if (b.has("T")) bc.T = positive(b, "T");
    b.finish();
    cfg.bounds = bc;
  }

  if (top.has("output")) {
    Section o = top.object("output");
    cfg.output_dir = o.string("dir");
    o.finish();
  }
  top.finish();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> cli_seed, const RunConfig& cfg) {
  if (cli_seed) return *cli_seed;
  if (cfg.ensemble && cfg.ensemble->master_seed) return *cfg.ensemble->master_seed;
  if (const char* env = std::getenv("QTRAJ_SEED"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (errno != 0 || *end != '\0' || env[0] == '-') {
      throw ConfigError("QTRAJ_SEED: expected an unsigned integer");
    }
    return v;
  }
  return 0;
}

}  // namespace qtraj

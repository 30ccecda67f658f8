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


#ifndef QTRAJ_CONFIG_HPP
#define QTRAJ_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qtraj/model.hpp"
#include "qtraj/numerics.hpp"
#include "qtraj/trajectory.hpp"

namespace qtraj {

inline constexpr int kSchemaVersion = 1;

struct MuGrid {
  double min = 0.0;
  double max = 0.0;
  std::size_t n = 1;

  std::vector<double> points() const;
};

struct EnsembleConfig {
  std::size_t n_traj = 1;
  std::optional<std::uint64_t> master_seed;
  Measure measure = Measure::reference;
  Equation equation = Equation::sme;
  std::size_t record_stride = 1;
  std::size_t dump = 0;
  bool drive_orthogonal = false;  // SSE readout phases of unobserved channels
};

enum class Route { closed_form, analytic, mc };

Route parse_route(const std::string& name);  // throws ConfigError
std::string to_string(Route r);

struct SpectrumConfig {
  Route route = Route::closed_form;
  MuGrid mu;
  std::vector<double> theta;
  std::optional<double> T;
};

struct SweepConfig {
  std::size_t n_sets = 20;
  std::uint64_t seed = 0;
};

struct BoundsConfig {
  std::optional<Route> route;
  MuGrid mu;
  std::vector<double> theta;
  std::optional<SweepConfig> sweep;
  std::optional<double> T;
};

/// Parsed and validated run configuration.
struct RunConfig {
  enum class ModelKind { two_level, generic };

  ModelKind kind = ModelKind::two_level;
  TwoLevelParams params;               // two_level only
  Detection detection = Detection::homodyne;
  ModelSpec model;                     // built model (both kinds)
  CMatrix rho0;
  std::optional<CVector> psi0;         // present for pure initial states
  std::optional<TimeGrid> grid;
  std::optional<EnsembleConfig> ensemble;
  std::optional<SpectrumConfig> spectrum;
  std::optional<BoundsConfig> bounds;
  std::string output_dir = "out";
};

/// Strict parse: unknown keys, wrong types and out-of-range values throw
/// ConfigError (or ParameterError) whose message begins with the field path.
RunConfig parse_config(const nlohmann::json& j);

/// Reads and parses a config file; unreadable files throw IoError, bad JSON ConfigError.
RunConfig load_config(const std::string& path);

/// --seed, then the config master_seed, then QTRAJ_SEED, then 0.
std::uint64_t resolve_seed(std::optional<std::uint64_t> cli_seed, const RunConfig& cfg);

}  // namespace qtraj

#endif  // QTRAJ_CONFIG_HPP

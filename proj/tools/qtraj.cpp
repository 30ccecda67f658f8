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


// qtraj command-line entry point.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qtraj/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Quantum trajectories for diffusive measurement: trajectories, spectra, bounds"};
  app.require_subcommand(1);

  qtraj::CommandOptions opt;
  std::string config, out, route, figure;
  std::uint64_t seed = 0;

  auto common = [&](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", config, "JSON configuration file");
    if (config_required) c->required();
    sub->add_option("--out", out, "output directory (overrides output.dir)");
    sub->add_option("--threads", opt.threads, "worker threads (default: OpenMP default)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", seed, "master seed (overrides the config and QTRAJ_SEED)");
  };

  auto* traj = app.add_subcommand("trajectories", "integrate an ensemble and dump trajectories");
  common(traj, true);
  auto* spec = app.add_subcommand("spectrum", "output spectrum by the configured route");
  common(spec, true);
  spec->add_option("--route", route, "closed-form | analytic | mc")
      ->check(CLI::IsMember({"closed-form", "analytic", "mc"}));
  auto* figs = app.add_subcommand("figures", "data for the homodyne and Mollow figures");
  common(figs, false);
  figs->add_option("--figure", figure, "fig1 | fig2 (default: both)")
      ->check(CLI::IsMember({"fig1", "fig2"}));
  auto* bounds = app.add_subcommand("bounds", "check the spectral uncertainty bounds");
  common(bounds, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? qtraj::kExitOk : qtraj::kExitConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (sub->count("--config")) opt.config_path = config;
  if (sub->count("--out")) opt.out_dir = out;
  if (sub->count("--seed")) opt.seed = seed;
  if (!route.empty()) opt.route = route;
  if (!figure.empty()) opt.figure = figure;
  return qtraj::run_command(sub->get_name(), opt, std::cout, std::cerr);
}

/*
 * Copyright 2026 The permest authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "permest/cli.hpp"
#include "permest/version.hpp"

int main(int argc, char** argv) {
  permest::cli::RunConfig cfg;

  CLI::App app{"Permanent estimation for Hermitian positive semidefinite matrices"};
  app.set_version_flag("--version", std::string("permest ") + permest::kVersion);
  app.require_subcommand(1);

  const auto add_matrix = [&](CLI::App* sub) {
    sub->add_option("--matrix", cfg.matrix_path, "Input matrix file")->required();
  };
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "RNG seed (PERMEST_SEED as fallback)")
        ->envname("PERMEST_SEED");
    sub->add_option("--workers", cfg.workers, "Worker stream count")->check(CLI::PositiveNumber);
    sub->add_option("--output", cfg.output_path, "Report file (default: stdout)");
  };

  auto* estimate = app.add_subcommand("estimate", "Coherent-state Monte Carlo estimate");
  add_matrix(estimate);
  estimate->add_option("--mode", cfg.mode, "Error mode")
      ->check(CLI::IsMember({"absolute", "gurvits-beating", "exp-decaying", "sqrt-relative"}));
  estimate->add_option("--epsilon", cfg.epsilon, "Target error in the mode's units");
  estimate->add_option("--delta", cfg.delta, "Failure probability");
  estimate->add_option("--c", cfg.c, "Rescale constant in (1, e], or 'auto'");
  estimate->add_flag("--force-rescale", cfg.force_rescale,
                     "Rescale even when lambda_max < 1");
  estimate->add_option("--sample-cap", cfg.sample_cap, "Refuse plans beyond this sample count");
  add_common(estimate);

  auto* exact = app.add_subcommand("exact", "Exact permanent (naive, Ryser, or Glynn)");
  add_matrix(exact);
  exact->add_option("--method", cfg.method, "Exact method")
      ->check(CLI::IsMember({"naive", "ryser", "glynn"}));
  add_common(exact);

  auto* gurvits = app.add_subcommand("gurvits", "Randomized Glynn/Gurvits baseline estimate");
  add_matrix(gurvits);
  gurvits->add_option("--epsilon", cfg.epsilon, "Additive error coefficient");
  gurvits->add_option("--delta", cfg.delta, "Failure probability");
  add_common(gurvits);

  auto* analyze = app.add_subcommand("analyze", "Spectral regime report with permanent bounds");
  add_matrix(analyze);
  analyze->add_option("--c", cfg.c, "Rescale constant in (1, e], or 'auto'");
  add_common(analyze);

  auto* gen = app.add_subcommand("gen", "Generate an HPSM matrix file");
  gen->add_option("--out", cfg.out_matrix_path, "Matrix file to write")->required();
  gen->add_option("--spectrum", cfg.spectrum, "Comma-separated target spectrum")->delimiter(',');
  gen->add_option("--m", cfg.gen_m, "Dimension for a random spectrum");
  gen->add_option("--lambda-max", cfg.gen_lambda_max, "Top eigenvalue for a random spectrum");
  add_common(gen);

  auto* bench = app.add_subcommand(
      "bench", "Compare the coherent-state estimator against the Gurvits baseline");
  bench->add_option("--sizes", cfg.sizes, "Comma-separated matrix sizes")
      ->delimiter(',')
      ->required();
  bench->add_option("--family", cfg.family, "Matrix family")
      ->check(CLI::IsMember({"spiked", "equal", "uniform", "diagonal"}));
  bench->add_option("--lambda-max", cfg.lambda_max, "Top eigenvalue of each instance");
  bench->add_option("--epsilon", cfg.epsilon, "Gurvits error coefficient");
  bench->add_option("--delta", cfg.delta, "Failure probability");
  bench->add_option("--trials", cfg.trials, "Instances per size");
  add_common(bench);

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
    return 2;  // invalid config
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  return permest::cli::run(cfg, std::cout);
}

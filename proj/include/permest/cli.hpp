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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "permest/types.hpp"

namespace permest::cli {

// Parsed command line. Which fields matter depends on the subcommand; the
// front end in tools/ fills this from flags, tests construct it directly.
struct RunConfig {
  std::string subcommand;  // estimate | exact | gurvits | analyze | gen | bench

  std::string matrix_path;
  double epsilon = 0.01;
  double delta = 0.05;
  std::string mode = "absolute";
  std::string c = "auto";
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::string method = "ryser";  // exact only
  std::string output_path;       // empty = stdout
  std::uint64_t sample_cap = 1'000'000'000;
  bool force_rescale = false;

  // gen
  std::string out_matrix_path;
  std::vector<double> spectrum;
  int gen_m = 0;
  double gen_lambda_max = 0.9;

  // bench
  std::vector<int> sizes;
  std::string family = "spiked";  // spiked | equal | uniform | diagonal
  int trials = 1;
  double lambda_max = 0.9;
};

// Runs the subcommand and returns the structured report. Throws Error on
// any failure; wall-clock fields are the only nondeterministic content.
nlohmann::ordered_json run_to_report(const RunConfig& config);

// Full CLI entry: writes the report to config.output_path or `out`, maps
// errors onto exit codes (0 ok, 2 invalid input/config, 3 regime not
// satisfied, 4 numerical failure / sample cap).
int run(const RunConfig& config, std::ostream& out);

}  // namespace permest::cli

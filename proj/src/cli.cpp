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

#include "permest/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "permest/estimator.hpp"
#include "permest/exact.hpp"
#include "permest/gurvits.hpp"
#include "permest/matrix_io.hpp"
#include "permest/regimes.hpp"
#include "permest/spectra.hpp"
#include "permest/version.hpp"

namespace permest::cli {
namespace {

using nlohmann::ordered_json;

std::optional<double> parse_c(const std::string& text) {
  if (text == "auto") return std::nullopt;
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &consumed);
  } catch (const std::exception&) {
    raise(Errc::InvalidConfig, "c must be 'auto' or a decimal number, got '" + text + "'");
  }
  if (consumed != text.size()) {
    raise(Errc::InvalidConfig, "c must be 'auto' or a decimal number, got '" + text + "'");
  }
  return value;
}

ordered_json complex_json(const Complex& z) { return {z.real(), z.imag()}; }

ordered_json digest_json(const std::string& path, const SpectralDecomposition& dec) {
  ordered_json digest;
  if (!path.empty()) digest["matrix"] = path;
  digest["m"] = dec.dim();
  digest["lambda_max"] = dec.lambda_max();
  digest["lambda_min"] = dec.lambda_min();
  digest["lambda_mean"] = dec.lambda_mean();
  return digest;
}

ordered_json config_echo(const RunConfig& cfg) {
  ordered_json echo;
  echo["subcommand"] = cfg.subcommand;
  if (!cfg.matrix_path.empty()) echo["matrix"] = cfg.matrix_path;
  if (cfg.subcommand == "estimate" || cfg.subcommand == "gurvits" || cfg.subcommand == "bench") {
    echo["epsilon"] = cfg.epsilon;
    echo["delta"] = cfg.delta;
  }
  if (cfg.subcommand == "estimate") {
    echo["mode"] = cfg.mode;
    echo["c"] = cfg.c;
    echo["force_rescale"] = cfg.force_rescale;
    echo["sample_cap"] = cfg.sample_cap;
  }
  if (cfg.subcommand == "analyze") echo["c"] = cfg.c;
  if (cfg.subcommand == "exact") echo["method"] = cfg.method;
  if (cfg.subcommand == "gen") {
    echo["out"] = cfg.out_matrix_path;
    if (!cfg.spectrum.empty()) {
      echo["spectrum"] = cfg.spectrum;
    } else {
      echo["m"] = cfg.gen_m;
      echo["lambda_max"] = cfg.gen_lambda_max;
    }
  }
  if (cfg.subcommand == "bench") {
    echo["family"] = cfg.family;
    echo["sizes"] = cfg.sizes;
    echo["lambda_max"] = cfg.lambda_max;
    echo["trials"] = cfg.trials;
  }
  echo["seed"] = cfg.seed;
  echo["workers"] = cfg.workers;
  if (!cfg.output_path.empty()) echo["output"] = cfg.output_path;
  return echo;
}

ordered_json estimate_result_json(const EstimateResult& result, unsigned workers) {
  ordered_json payload;
  payload["estimate"] = result.estimate;
  payload["log_estimate"] = result.log_estimate;
  payload["n_samples"] = result.n_samples;
  payload["epsilon_target"] = result.mode.epsilon;
  payload["epsilon_achieved"] = result.epsilon;
  payload["delta"] = result.delta;
  payload["mode"] = error_mode_name(result.mode.kind);
  payload["seed"] = result.seed;
  payload["workers"] = workers;
  payload["mean_scaled"] = result.mean_scaled;
  return payload;
}

ordered_json run_estimate(const RunConfig& cfg, const HpsmMatrix& mat,
                          const SpectralDecomposition& dec) {
  const ErrorMode mode{parse_error_mode(cfg.mode), cfg.epsilon};
  EstimateOptions options;
  options.delta = cfg.delta;
  options.c = parse_c(cfg.c);
  options.force_rescale = cfg.force_rescale;
  options.seed = cfg.seed;
  options.workers = cfg.workers;
  options.sample_cap = cfg.sample_cap;

  const EstimateResult result = estimate_permanent(mat, mode, options);
  ordered_json payload = estimate_result_json(result, cfg.workers);

  if (dec.lambda_max() > 0.0) {
    // Echo the plan the estimator resolved (same deterministic path).
    const double c = options.c ? *options.c : optimize_scale(dec);
    const ScalePlan plan = make_scale_plan(dec, c, options.force_rescale);
    ordered_json scale;
    scale["c"] = plan.c;
    scale["c_effective"] = plan.c_effective;
    scale["s"] = plan.s;
    scale["rescaled"] = plan.rescaled;
    scale["log_z"] = plan.log_z;
    payload["scale"] = std::move(scale);
  } else {
    payload["scale"] = nullptr;  // zero matrix short-circuit
  }
  return payload;
}

ordered_json run_exact(const RunConfig& cfg, const HpsmMatrix& mat) {
  const ExactMethod method = parse_exact_method(cfg.method);
  const Complex value = permanent_exact(mat.entries(), method, cfg.workers);
  ordered_json payload;
  payload["method"] = exact_method_name(method);
  payload["value"] = complex_json(value);
  payload["abs"] = std::abs(value);
  return payload;
}

ordered_json run_gurvits(const RunConfig& cfg, const HpsmMatrix& mat,
                         const SpectralDecomposition& dec) {
  const GurvitsResult result =
      gurvits_estimate(mat.entries(), cfg.epsilon, cfg.delta, cfg.seed, cfg.workers);
  ordered_json payload;
  payload["estimate"] = complex_json(result.estimate);
  payload["n_samples"] = result.n_samples;
  payload["epsilon"] = result.epsilon;
  payload["delta"] = result.delta;
  payload["seed"] = result.seed;
  const double budget_log =
      std::log(cfg.epsilon) + dec.dim() * std::log(dec.lambda_max());
  payload["error_budget_log"] = budget_log;
  payload["error_budget"] = std::exp(budget_log);
  return payload;
}

ordered_json regime_json(const RegimeReport& report) {
  ordered_json payload;
  payload["a"] = report.a;
  payload["d"] = report.d;
  if (std::isfinite(report.f)) payload["f"] = report.f;
  payload["s1"] = {{"verdict", verdict_name(report.s1.verdict)}, {"l", report.s1.l}};
  payload["s2"] = {{"verdict", verdict_name(report.s2.verdict)}, {"k", report.s2.k}};
  payload["s3"] = {{"verdict", verdict_name(report.s3.verdict)}, {"ratio", report.s3.ratio}};
  ordered_json checks;
  for (const auto& [name, holds] : report.necessary_checks) checks[name] = holds;
  payload["necessary_checks"] = std::move(checks);
  payload["upper_bound_log"] = report.upper_bound_log;
  payload["upper_bound"] = std::exp(report.upper_bound_log);
  payload["lower_bound_log"] = report.lower_bound_log;
  payload["lower_bound"] = std::exp(report.lower_bound_log);
  payload["c_used"] = report.c_used;
  payload["mean_lambda"] = report.mean_lambda;
  if (report.exact_permanent) payload["exact_permanent"] = *report.exact_permanent;
  return payload;
}

ordered_json run_analyze(const RunConfig& cfg, const HpsmMatrix& mat) {
  return regime_json(analyze(mat, parse_c(cfg.c)));
}

ordered_json run_gen(const RunConfig& cfg) {
  if (cfg.out_matrix_path.empty()) {
    raise(Errc::InvalidConfig, "gen needs --out for the generated matrix file");
  }
  HpsmMatrix mat = [&] {
    if (!cfg.spectrum.empty()) {
      RVector spectrum(static_cast<Eigen::Index>(cfg.spectrum.size()));
      for (std::size_t i = 0; i < cfg.spectrum.size(); ++i) {
        spectrum(static_cast<Eigen::Index>(i)) = cfg.spectrum[i];
      }
      return gen_from_spectrum(spectrum, cfg.seed);
    }
    if (cfg.gen_m < 1) {
      raise(Errc::InvalidConfig, "gen needs --spectrum or a positive --m");
    }
    return gen_random_hpsm(cfg.gen_m, cfg.gen_lambda_max, cfg.seed);
  }();
  write_matrix_file(cfg.out_matrix_path, mat.entries());

  const SpectralDecomposition dec = spectral_decompose(mat);
  ordered_json payload;
  payload["written"] = cfg.out_matrix_path;
  payload["m"] = mat.dim();
  payload["lambda_max"] = dec.lambda_max();
  payload["lambda_min"] = dec.lambda_min();
  payload["lambda_mean"] = dec.lambda_mean();
  payload["seed"] = cfg.seed;
  return payload;
}

HpsmMatrix make_family_matrix(const std::string& family, int m, double lambda_max,
                              std::uint64_t seed) {
  if (family == "spiked") {
    RVector spectrum = RVector::Zero(m);
    spectrum(0) = lambda_max;
    return gen_from_spectrum(spectrum, seed);
  }
  if (family == "equal") {
    RVector spectrum = RVector::Constant(m, lambda_max);
    return gen_from_spectrum(spectrum, seed);
  }
  if (family == "uniform") {
    return gen_random_hpsm(m, lambda_max, seed);
  }
  if (family == "diagonal") {
    RngStream rng(seed, 0xd1a6);
    RVector diag(m);
    for (int i = 0; i < m; ++i) diag(i) = rng.next_double();
    double top = diag.maxCoeff();
    if (top <= 0.0) top = 1.0;
    diag *= lambda_max / top;
    CMatrix mat = CMatrix::Zero(m, m);
    for (int i = 0; i < m; ++i) mat(i, i) = diag(i);
    return validate_hpsm(mat);
  }
  raise(Errc::InvalidConfig, "unknown bench family '" + family + "'");
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL * (a + 1)) ^ (0xbf58476d1ce4e5b9ULL * (b + 1));
  return splitmix64(x);
}

ordered_json run_bench(const RunConfig& cfg) {
  if (cfg.sizes.empty()) raise(Errc::InvalidConfig, "bench needs --sizes");
  if (cfg.trials < 1) raise(Errc::InvalidConfig, "bench needs a positive --trials");
  if (!(cfg.epsilon > 0.0)) raise(Errc::InvalidConfig, "epsilon must be positive");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) {
    raise(Errc::InvalidConfig, "delta must lie in (0, 1)");
  }

  using clock = std::chrono::steady_clock;
  ordered_json rows = ordered_json::array();
  const std::uint64_t n_budget = gurvits_sample_count(cfg.epsilon, cfg.delta);

  for (int m : cfg.sizes) {
    if (m < 1) raise(Errc::InvalidConfig, "bench sizes must be positive");
    if (m > kExactMaxDim) raise(Errc::InvalidConfig, "bench sizes are capped at 24");
    for (int trial = 0; trial < cfg.trials; ++trial) {
      const std::uint64_t row_seed =
          derive_seed(cfg.seed, static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(trial));
      const HpsmMatrix mat = make_family_matrix(cfg.family, m, cfg.lambda_max, row_seed);
      const SpectralDecomposition dec = spectral_decompose(mat);
      const ScalePlan plan = make_scale_plan(dec, optimize_scale(dec));

      // Both estimators get the same sample budget; the coherent-state
      // sampler's additive guarantee at that budget comes from inverting its
      // Hoeffding count.
      const double matched_eps_log =
          plan.log_z - m +
          0.5 * (std::log(std::log(1.0 / cfg.delta)) -
                 std::log(2.0 * static_cast<double>(n_budget)));
      const double matched_eps = std::exp(matched_eps_log);

      const auto t0 = clock::now();
      const EstimateResult cs =
          estimate_with_budget(dec, plan, ErrorMode{ErrorModeKind::Absolute, matched_eps},
                               cfg.delta, n_budget, matched_eps,
                               derive_seed(row_seed, 0, 0), cfg.workers);
      const auto t1 = clock::now();
      const GurvitsResult gurvits = gurvits_estimate(mat.entries(), cfg.epsilon, cfg.delta,
                                                     derive_seed(row_seed, 1, 0), cfg.workers);
      const auto t2 = clock::now();

      ordered_json row;
      row["m"] = m;
      row["trial"] = trial;
      row["seed"] = row_seed;
      row["n_samples"] = n_budget;
      row["s1"] = verdict_name(check_s1(dec, plan).verdict);
      const double budget_log = std::log(cfg.epsilon) + m * std::log(dec.lambda_max());
      row["gurvits_error_budget"] = std::exp(budget_log);
      if (m <= kAnalyzeExactMaxDim) {
        const double exact = permanent_ryser(mat.entries(), cfg.workers).real();
        row["exact"] = exact;
        row["cs_abs_error"] = std::abs(cs.estimate - exact);
        row["gurvits_abs_error"] = std::abs(gurvits.estimate - Complex(exact, 0.0));
      } else {
        row["exact"] = nullptr;
        row["cs_abs_error"] = nullptr;
        row["gurvits_abs_error"] = nullptr;
      }
      row["cs_estimate"] = cs.estimate;
      row["cs_epsilon_matched"] = matched_eps;
      row["gurvits_estimate"] = complex_json(gurvits.estimate);
      row["cs_seconds"] = std::chrono::duration<double>(t1 - t0).count();
      row["gurvits_seconds"] = std::chrono::duration<double>(t2 - t1).count();
      rows.push_back(std::move(row));
    }
  }

  ordered_json payload;
  payload["family"] = cfg.family;
  payload["epsilon"] = cfg.epsilon;
  payload["delta"] = cfg.delta;
  payload["n_samples"] = n_budget;
  payload["rows"] = std::move(rows);
  return payload;
}

}  // namespace

ordered_json run_to_report(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();

  ordered_json report;
  report["tool"] = "permest";
  report["version"] = kVersion;
  report["subcommand"] = cfg.subcommand;
  report["config"] = config_echo(cfg);

  if (cfg.subcommand == "estimate" || cfg.subcommand == "exact" ||
      cfg.subcommand == "gurvits" || cfg.subcommand == "analyze") {
    if (cfg.matrix_path.empty()) raise(Errc::InvalidConfig, "missing --matrix");
    const HpsmMatrix mat = read_matrix_file(cfg.matrix_path);
    const SpectralDecomposition dec = spectral_decompose(mat);
    report["input"] = digest_json(cfg.matrix_path, dec);
    if (cfg.subcommand == "estimate") {
      report["result"] = run_estimate(cfg, mat, dec);
    } else if (cfg.subcommand == "exact") {
      report["result"] = run_exact(cfg, mat);
    } else if (cfg.subcommand == "gurvits") {
      report["result"] = run_gurvits(cfg, mat, dec);
    } else {
      report["result"] = run_analyze(cfg, mat);
    }
  } else if (cfg.subcommand == "gen") {
    report["result"] = run_gen(cfg);
  } else if (cfg.subcommand == "bench") {
    report["result"] = run_bench(cfg);
  } else {
    raise(Errc::InvalidConfig, "unknown subcommand '" + cfg.subcommand + "'");
  }

  report["wall_seconds"] = std::chrono::duration<double>(
      std::chrono::steady_clock::now() - start).count();
  return report;
}

int run(const RunConfig& cfg, std::ostream& out) {
  try {
    const ordered_json report = run_to_report(cfg);
    const std::string text = dump_json(report) + "\n";
    if (!cfg.output_path.empty()) {
      std::ofstream file(cfg.output_path);
      if (!file) {
        std::cerr << "error: IoError: cannot open '" << cfg.output_path << "' for writing\n";
        return exit_code(Errc::IoError);
      }
      file << text;
    } else {
      out << text;
    }
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.errc());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(Errc::NumericalFailure);
  }
}

}  // namespace permest::cli

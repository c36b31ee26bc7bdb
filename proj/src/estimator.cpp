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

#include "permest/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "permest/compensated.hpp"
#include "permest/regimes.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace permest {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_plan_matches(const ScalePlan& plan, const SpectralDecomposition& dec) {
  if (plan.dim() != dec.dim()) {
    raise(Errc::DimensionMismatch, "scale plan dimension " + std::to_string(plan.dim()) +
                                       " does not match decomposition dimension " +
                                       std::to_string(dec.dim()));
  }
}

double log_z_at(const SpectralDecomposition& dec, double s) {
  const int m = dec.dim();
  double sum_log = 0.0;
  for (int i = 0; i < m; ++i) sum_log += std::log(s - dec.spectrum(i));
  return 2.0 * m * std::log(s) - sum_log;
}

// Sum of the scaled samples owned by one worker stream: samples
// {w, w+workers, ...} below n, all drawn in order from stream (seed, w).
double worker_scaled_sum(const ScalePlan& plan, const SpectralDecomposition& dec,
                         std::uint64_t n, std::uint64_t seed, unsigned workers, unsigned w) {
  const std::uint64_t quota = n / workers + (w < n % workers ? 1 : 0);
  RngStream rng(seed, w);
  const int m = dec.dim();
  CVector alpha(m);
  CVector beta(m);
  CompensatedSum<double> acc;
  for (std::uint64_t k = 0; k < quota; ++k) {
    for (int i = 0; i < m; ++i) alpha(i) = rng.next_complex_gaussian(plan.nbar[i]);
    beta.noalias() = dec.unitary * alpha;
    const double lp = log_single_photon_prob(beta);
    double r = std::exp(static_cast<double>(m) + lp);
    if (r > 1.0) r = 1.0;  // half-ulp spill at the p = e^{-M} edge
    acc.add(r);
  }
  return acc.value();
}

double merge_scaled_mean(const std::vector<double>& partial, std::uint64_t n) {
  CompensatedSum<double> total;
  for (double v : partial) total.add(v);
  const double mean = total.value() / static_cast<double>(n);
  return std::clamp(mean, 0.0, 1.0);
}

void check_sampling_args(const ScalePlan& plan, const SpectralDecomposition& dec,
                         std::uint64_t n, unsigned workers) {
  check_plan_matches(plan, dec);
  if (n == 0) raise(Errc::InvalidConfig, "sample count must be positive");
  if (workers == 0) raise(Errc::InvalidConfig, "workers must be positive");
}

}  // namespace

ErrorModeKind parse_error_mode(const std::string& name) {
  if (name == "absolute") return ErrorModeKind::Absolute;
  if (name == "gurvits-beating") return ErrorModeKind::GurvitsBeating;
  if (name == "exp-decaying") return ErrorModeKind::ExpDecaying;
  if (name == "sqrt-relative") return ErrorModeKind::SqrtRelative;
  raise(Errc::InvalidConfig, "unknown error mode '" + name + "'");
}

const char* error_mode_name(ErrorModeKind kind) {
  switch (kind) {
    case ErrorModeKind::Absolute: return "absolute";
    case ErrorModeKind::GurvitsBeating: return "gurvits-beating";
    case ErrorModeKind::ExpDecaying: return "exp-decaying";
    case ErrorModeKind::SqrtRelative: return "sqrt-relative";
  }
  return "unknown";
}

ScalePlan make_scale_plan(const SpectralDecomposition& dec, double c, bool force_rescale) {
  const double lambda_max = dec.lambda_max();
  if (!(lambda_max > 0.0)) {
    raise(Errc::ZeroMatrix, "the zero matrix has no scale plan; its permanent is 0");
  }
  if (!(c > 1.0) || !(c <= std::numbers::e) || !std::isfinite(c)) {
    std::ostringstream oss;
    oss << "rescale constant c = " << c << " outside (1, e]";
    raise(Errc::InvalidC, oss.str());
  }

  ScalePlan plan;
  plan.c = c;
  plan.rescaled = (lambda_max >= 1.0) || force_rescale;
  plan.s = plan.rescaled ? c * lambda_max : 1.0;
  plan.c_effective = plan.rescaled ? c : 1.0 / lambda_max;

  const int m = dec.dim();
  plan.tau.resize(m);
  plan.nbar.resize(m);
  for (int i = 0; i < m; ++i) {
    const double tau = dec.spectrum(i) / plan.s;
    plan.tau[i] = tau;
    plan.nbar[i] = tau / (1.0 - tau);
  }
  plan.log_z = log_z_at(dec, plan.s);
  return plan;
}

double optimize_scale(const SpectralDecomposition& dec) {
  const double lambda_max = dec.lambda_max();
  if (!(lambda_max > 0.0)) {
    raise(Errc::ZeroMatrix, "the zero matrix has no scale to optimize");
  }
  const double e = std::numbers::e;
  if (lambda_max < 1.0) return e;  // unit-scale path, the constant is unused

  const auto objective = [&](double c) { return log_z_at(dec, c * lambda_max); };

  constexpr int kGridPoints = 1024;
  int best = 1;
  double best_value = kInf;
  for (int j = 1; j <= kGridPoints; ++j) {
    const double c = 1.0 + (e - 1.0) * j / kGridPoints;
    const double value = objective(c);
    if (value < best_value) {
      best_value = value;
      best = j;
    }
  }
  double lo = 1.0 + (e - 1.0) * (best - 1) / kGridPoints;
  double hi = 1.0 + (e - 1.0) * std::min(best + 1, kGridPoints) / kGridPoints;
  lo = std::max(lo, 1.0 + 1e-12);

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (hi - lo > 1e-6 * hi) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = objective(x2);
    }
  }
  return 0.5 * (lo + hi);
}

CVector sample_coherent_amplitudes(const ScalePlan& plan, RngStream& rng) {
  const int m = plan.dim();
  CVector alpha(m);
  for (int i = 0; i < m; ++i) alpha(i) = rng.next_complex_gaussian(plan.nbar[i]);
  return alpha;
}

CVector transform_amplitudes(const CMatrix& unitary, const CVector& amplitudes) {
  if (unitary.rows() != unitary.cols() || unitary.rows() != amplitudes.size()) {
    raise(Errc::DimensionMismatch, "circuit unitary and amplitude vector sizes disagree");
  }
  return unitary * amplitudes;
}

double log_single_photon_prob(const CVector& amplitudes) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < amplitudes.size(); ++i) {
    const double t = std::norm(amplitudes(i));
    if (t == 0.0) return -kInf;
    acc += std::log(t) - t;
  }
  return acc;
}

SamplePlan plan_samples(const ScalePlan& plan, const SpectralDecomposition& dec,
                        const ErrorMode& mode, double delta, std::uint64_t sample_cap) {
  check_plan_matches(plan, dec);
  if (!(delta > 0.0 && delta < 1.0)) raise(Errc::InvalidConfig, "delta must lie in (0, 1)");
  if (!(mode.epsilon > 0.0) || !std::isfinite(mode.epsilon)) {
    raise(Errc::InvalidConfig, "epsilon must be positive and finite");
  }
  if (sample_cap == 0) raise(Errc::InvalidConfig, "sample cap must be positive");

  const int m = dec.dim();
  const double eps = mode.epsilon;
  const double log_log_inv_delta = std::log(std::log(1.0 / delta));
  const double log_two_eps_sq = std::log(2.0 * eps * eps);

  SamplePlan out;
  double log_n = 0.0;
  switch (mode.kind) {
    case ErrorModeKind::Absolute: {
      log_n = 2.0 * plan.log_z - 2.0 * m - log_two_eps_sq + log_log_inv_delta;
      out.log_error_bound = std::log(eps);
      out.epsilon_achieved = eps;
      break;
    }
    case ErrorModeKind::GurvitsBeating: {
      const S1Check s1 = check_s1(dec, plan);
      if (s1.verdict != Verdict::Holds) {
        std::ostringstream oss;
        oss << "gurvits-beating mode needs a >= lambda_max c^2 / e; l = " << s1.l << " > 1";
        raise(Errc::RegimeNotSatisfied, oss.str());
      }
      log_n = log_log_inv_delta - log_two_eps_sq;
      out.log_error_bound =
          std::log(eps) + m * (std::log(s1.l) + std::log(dec.lambda_max()));
      out.epsilon_achieved = std::exp(out.log_error_bound);
      break;
    }
    case ErrorModeKind::ExpDecaying: {
      const S2Check s2 = check_s2(dec, plan);
      if (s2.verdict == Verdict::NotApplicable) {
        raise(Errc::RegimeNotSatisfied,
              "exp-decaying mode applies only when lambda_max >= 1");
      }
      if (s2.verdict != Verdict::Holds) {
        std::ostringstream oss;
        oss << "exp-decaying mode needs a >= lambda_max^2 c^2 / e; k = " << s2.k << " > 1";
        raise(Errc::RegimeNotSatisfied, oss.str());
      }
      log_n = log_log_inv_delta - log_two_eps_sq;
      out.log_error_bound = std::log(eps) + m * std::log(s2.k);
      out.epsilon_achieved = std::exp(out.log_error_bound);
      break;
    }
    case ErrorModeKind::SqrtRelative: {
      if (!(dec.lambda_min() > 0.0)) {
        raise(Errc::RegimeNotSatisfied,
              "sqrt-relative mode needs a strictly positive spectrum (lambda_min = 0)");
      }
      const S3Check s3 = check_s3(dec, plan);
      if (s3.verdict != Verdict::Holds) {
        std::ostringstream oss;
        oss << "sqrt-relative mode needs lambda_max^4 c^4 d / (lambda_min^2 e^2) <= 1; got "
            << s3.ratio;
        raise(Errc::RegimeNotSatisfied, oss.str());
      }
      log_n = log_log_inv_delta - log_two_eps_sq + m * std::log(s3.ratio);
      out.log_error_bound = kNaN;  // the additive bound is eps * sqrt(Per), value unknown
      out.epsilon_achieved = eps;
      break;
    }
  }

  if (log_n > std::log(static_cast<double>(sample_cap))) {
    std::ostringstream oss;
    oss << "planned sample count exp(" << log_n << ") exceeds the cap " << sample_cap;
    raise(Errc::Overflow, oss.str());
  }
  const double n_real = std::ceil(std::exp(log_n));
  out.n = n_real < 1.0 ? 1 : static_cast<std::uint64_t>(n_real);
  return out;
}

double sample_mean_scaled(const ScalePlan& plan, const SpectralDecomposition& dec,
                          std::uint64_t n, std::uint64_t seed, unsigned workers) {
  check_sampling_args(plan, dec, n, workers);
  std::vector<double> partial(workers, 0.0);
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic)
#endif
  for (std::int64_t w = 0; w < static_cast<std::int64_t>(workers); ++w) {
    partial[static_cast<std::size_t>(w)] =
        worker_scaled_sum(plan, dec, n, seed, workers, static_cast<unsigned>(w));
  }
  return merge_scaled_mean(partial, n);
}

double sample_mean_scaled_serial(const ScalePlan& plan, const SpectralDecomposition& dec,
                                 std::uint64_t n, std::uint64_t seed, unsigned workers) {
  check_sampling_args(plan, dec, n, workers);
  std::vector<double> partial(workers, 0.0);
  for (unsigned w = 0; w < workers; ++w) {
    partial[w] = worker_scaled_sum(plan, dec, n, seed, workers, w);
  }
  return merge_scaled_mean(partial, n);
}

EstimateResult estimate_with_budget(const SpectralDecomposition& dec, const ScalePlan& plan,
                                    const ErrorMode& mode, double delta, std::uint64_t n,
                                    double epsilon_achieved, std::uint64_t seed,
                                    unsigned workers) {
  const double mean = sample_mean_scaled(plan, dec, n, seed, workers);
  EstimateResult result;
  result.mean_scaled = mean;
  if (mean > 0.0) {
    result.log_estimate = plan.log_z - dec.dim() + std::log(mean);
    result.estimate = std::exp(result.log_estimate);
  } else {
    result.log_estimate = -kInf;
    result.estimate = 0.0;
  }
  result.n_samples = n;
  result.epsilon = epsilon_achieved;
  result.delta = delta;
  result.mode = mode;
  result.seed = seed;
  return result;
}

EstimateResult estimate_permanent(const HpsmMatrix& mat, const ErrorMode& mode,
                                  const EstimateOptions& options) {
  if (!(options.delta > 0.0 && options.delta < 1.0)) {
    raise(Errc::InvalidConfig, "delta must lie in (0, 1)");
  }
  if (!(mode.epsilon > 0.0) || !std::isfinite(mode.epsilon)) {
    raise(Errc::InvalidConfig, "epsilon must be positive and finite");
  }
  if (options.workers == 0) raise(Errc::InvalidConfig, "workers must be positive");
  if (options.c && (!(*options.c > 1.0) || !(*options.c <= std::numbers::e))) {
    raise(Errc::InvalidC, "rescale constant must lie in (1, e]");
  }

  const SpectralDecomposition dec = spectral_decompose(mat);
  if (!(dec.lambda_max() > 0.0)) {
    // Per(0) = 0 for M >= 1; no sampling needed.
    EstimateResult result;
    result.log_estimate = -kInf;
    result.estimate = 0.0;
    result.n_samples = 1;
    result.epsilon = 0.0;
    result.delta = options.delta;
    result.mode = mode;
    result.seed = options.seed;
    result.mean_scaled = 0.0;
    return result;
  }

  const double c = options.c ? *options.c : optimize_scale(dec);
  const ScalePlan plan = make_scale_plan(dec, c, options.force_rescale);
  const SamplePlan sample_plan = plan_samples(plan, dec, mode, options.delta, options.sample_cap);
  return estimate_with_budget(dec, plan, mode, options.delta, sample_plan.n,
                              sample_plan.epsilon_achieved, options.seed, options.workers);
}

}  // namespace permest

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
#include <optional>
#include <string>
#include <vector>

#include "permest/rng.hpp"
#include "permest/spectra.hpp"
#include "permest/types.hpp"

namespace permest {

enum class ErrorModeKind { Absolute, GurvitsBeating, ExpDecaying, SqrtRelative };

ErrorModeKind parse_error_mode(const std::string& name);
const char* error_mode_name(ErrorModeKind kind);

// Target error contract for an estimate. The meaning of epsilon depends on
// the kind:
//   Absolute       - additive error on the permanent itself;
//   GurvitsBeating - coefficient of (l * lambda_max)^M;
//   ExpDecaying    - coefficient of k^M;
//   SqrtRelative   - coefficient of sqrt(Per).
struct ErrorMode {
  ErrorModeKind kind = ErrorModeKind::Absolute;
  double epsilon = 0.01;
};

// Mapping of the input spectrum onto thermal occupation parameters.
//   s           = c * lambda_max when rescaling is engaged (lambda_max >= 1
//                 or force_rescale), 1 otherwise;
//   tau_i       = lambda_i / s, always in [0, 1);
//   nbar_i      = tau_i / (1 - tau_i), the per-mode mean photon number;
//   log_z       = 2 M ln s - sum_i ln(s - lambda_i), the log prefactor that
//                 converts the sampled mean back to the permanent;
//   c_effective = s / lambda_max, the constant the regime formulas see
//                 (equals c when rescaled, 1/lambda_max on the unit-scale
//                 path).
struct ScalePlan {
  double c = 0.0;
  double s = 0.0;
  double c_effective = 0.0;
  bool rescaled = false;
  double log_z = 0.0;
  std::vector<double> tau;
  std::vector<double> nbar;

  int dim() const { return static_cast<int>(tau.size()); }
};

inline constexpr std::uint64_t kDefaultSampleCap = 1'000'000'000;

// Requires 1 < c <= e and a nonzero spectrum. With lambda_max < 1 the matrix
// is left unscaled (s = 1) unless force_rescale is set.
ScalePlan make_scale_plan(const SpectralDecomposition& dec, double c, bool force_rescale = false);

// c in (1, e] minimizing log_z: coarse grid of 1024 points refined by
// golden section to relative 1e-6. Returns e (unused downstream) when
// lambda_max < 1, where no rescaling happens.
double optimize_scale(const SpectralDecomposition& dec);

struct SamplePlan {
  std::uint64_t n = 0;
  // Achieved error in the mode's units: the permanent-scale additive bound
  // for Absolute/GurvitsBeating/ExpDecaying, the sqrt(Per) coefficient for
  // SqrtRelative.
  double epsilon_achieved = 0.0;
  double log_error_bound = 0.0;  // ln of the additive bound; NaN for SqrtRelative
};

// Hoeffding sample count for the requested error mode, evaluated in the log
// domain. The non-absolute modes require their spectral condition to hold
// and raise RegimeNotSatisfied otherwise; counts above sample_cap raise
// Overflow.
SamplePlan plan_samples(const ScalePlan& plan, const SpectralDecomposition& dec,
                        const ErrorMode& mode, double delta,
                        std::uint64_t sample_cap = kDefaultSampleCap);

// One coherent-amplitude draw: component i is complex Gaussian with
// E|alpha_i|^2 = nbar_i; nbar_i = 0 gives exactly 0.
CVector sample_coherent_amplitudes(const ScalePlan& plan, RngStream& rng);

// Output amplitudes of the linear circuit: out = U in, with U the matrix
// whose columns are the eigenvectors of the target matrix. This forward
// orientation (equivalently its elementwise conjugate) is the one whose
// sampled mean reproduces exact permanents; the reversed maps U^T / U^dagger
// estimate the permanent of the basis-reversed matrix instead, which differs
// once the eigenbasis is complex or degenerate. Preserves the Euclidean norm
// for unitary U.
CVector transform_amplitudes(const CMatrix& unitary, const CVector& amplitudes);

// ln prod_i |b_i|^2 e^{-|b_i|^2}: log-probability of one photon in every
// output mode given output amplitudes b. Returns -inf when any amplitude
// vanishes; always <= -M since t e^{-t} <= 1/e.
double log_single_photon_prob(const CVector& amplitudes);

// Mean over n draws of e^M p(alpha), a value in [0, 1]. Sample j belongs to
// worker stream j mod workers; each worker owns a compensated accumulator
// and the partials are merged in stream order, so the result is a pure
// function of (plan, dec, n, seed, workers). The first overload runs the
// workers under OpenMP, the serial one is the bit-identical single-thread
// reference.
double sample_mean_scaled(const ScalePlan& plan, const SpectralDecomposition& dec,
                          std::uint64_t n, std::uint64_t seed, unsigned workers);
double sample_mean_scaled_serial(const ScalePlan& plan, const SpectralDecomposition& dec,
                                 std::uint64_t n, std::uint64_t seed, unsigned workers);

struct EstimateResult {
  double log_estimate = 0.0;  // -inf for a zero estimate
  double estimate = 0.0;
  std::uint64_t n_samples = 0;
  double epsilon = 0.0;  // achieved error in the mode's units
  double delta = 0.0;
  ErrorMode mode;
  std::uint64_t seed = 0;
  double mean_scaled = 0.0;
};

struct EstimateOptions {
  double delta = 0.05;
  std::optional<double> c;  // nullopt = pick via optimize_scale
  bool force_rescale = false;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::uint64_t sample_cap = kDefaultSampleCap;
};

// Fixed-budget estimate from a precomputed decomposition and plan; used by
// the planner path and by benchmark comparisons at matched sample budgets.
EstimateResult estimate_with_budget(const SpectralDecomposition& dec, const ScalePlan& plan,
                                    const ErrorMode& mode, double delta, std::uint64_t n,
                                    double epsilon_achieved, std::uint64_t seed,
                                    unsigned workers);

// End-to-end estimator: decompose, scale, plan the sample count, sample,
// average, multiply by the prefactor. The zero matrix short-circuits to an
// exact 0 without sampling.
EstimateResult estimate_permanent(const HpsmMatrix& mat, const ErrorMode& mode,
                                  const EstimateOptions& options = {});

}  // namespace permest

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

#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "permest/estimator.hpp"
#include "permest/spectra.hpp"
#include "permest/types.hpp"

namespace permest {

enum class Verdict { Holds, Fails, NotApplicable };

const char* verdict_name(Verdict verdict);

// Cap appearing in the S1 necessary chain: lambda_mean <= ... <= e/4.
inline constexpr double kQuarterE = std::numbers::e / 4.0;

// Geometric mean of {s - lambda_i}, in the log domain. Requires s > lambda_max.
double geo_mean_a(const RVector& spectrum, double s);

// Geometric mean of {lambda_i / (s - lambda_i)^2}; with s = 1 this is the
// unit-scale variant used when lambda_max < 1. Requires a positive spectrum.
double geo_mean_d(const RVector& spectrum, double s);

// S1: the sampler beats the plain Gurvits additive budget, shrinking it by
// l^M. Holds iff a >= lambda_max c^2 / e with l = lambda_max c^2 / (e a).
// The necessary flags are reported as observed; mean_bound and c_bound are
// implied whenever the verdict holds, scale_bound additionally needs
// lambda_max <= 1.
struct S1Check {
  Verdict verdict = Verdict::Fails;
  double l = 0.0;
  bool mean_bound = false;   // lambda_mean <= lambda_max c (1 - c/e)
  bool scale_bound = false;  // lambda_max c (1 - c/e) <= e/4
  bool c_bound = false;      // c <= e
};

// S2: additive error decaying like k^M despite lambda_max >= 1. Not
// applicable below that premise. Holds iff a >= lambda_max^2 c^2 / e with
// k = lambda_max^2 c^2 / (e a).
struct S2Check {
  Verdict verdict = Verdict::NotApplicable;
  double k = 0.0;
  bool mean_bound = false;        // lambda_mean <= lambda_max c (1 - lambda_max c / e)
  bool lambda_max_bound = false;  // lambda_max <= e / c
  bool c_bound = false;           // c <= e
};

// S3: error of epsilon sqrt(Per). Holds iff
// ratio = lambda_max^4 c^4 d / (lambda_min^2 e^2) <= 1. Requires a strictly
// positive spectrum.
struct S3Check {
  Verdict verdict = Verdict::Fails;
  double ratio = 0.0;
};

S1Check check_s1(const SpectralDecomposition& dec, const ScalePlan& plan);
S2Check check_s2(const SpectralDecomposition& dec, const ScalePlan& plan);
S3Check check_s3(const SpectralDecomposition& dec, const ScalePlan& plan);

// ln of (c^2 lambda_max^2 / (a e))^M = M (2 ln s - ln a - 1); an upper bound
// on the permanent for any valid plan.
double permanent_upper_bound_log(const SpectralDecomposition& dec, const ScalePlan& plan);

// ln of lambda_min^(2M) / prod lambda_i; -inf for singular matrices, where
// the bound degenerates to 0.
double permanent_lower_bound_log(const SpectralDecomposition& dec);

struct RegimeReport {
  double a = 0.0;
  double d = 0.0;  // NaN for singular matrices
  double f = 0.0;  // populated only when lambda_max < 1 (and nonsingular)
  S1Check s1;
  S2Check s2;
  S3Check s3;
  std::vector<std::pair<std::string, bool>> necessary_checks;
  double upper_bound_log = 0.0;
  double lower_bound_log = 0.0;
  double c_used = 0.0;  // effective constant after the unit-scale substitution
  double mean_lambda = 0.0;
  std::optional<double> exact_permanent;  // Ryser value, attached for M <= 12
};

inline constexpr int kAnalyzeExactMaxDim = 12;

// Full regime report for a validated matrix with lambda_max > 0. With
// attach_exact and M <= 12 the Ryser permanent is attached and the bound
// sandwich verified (NumericalFailure if violated).
RegimeReport analyze(const HpsmMatrix& mat, std::optional<double> c = std::nullopt,
                     bool attach_exact = true);

}  // namespace permest

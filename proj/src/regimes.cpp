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

#include "permest/regimes.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "permest/exact.hpp"

namespace permest {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_scale(const RVector& spectrum, double s) {
  if (spectrum.size() < 1) raise(Errc::InvalidConfig, "empty spectrum");
  if (!(s > spectrum.maxCoeff())) {
    raise(Errc::InvalidConfig, "scale s must exceed lambda_max");
  }
}

}  // namespace

const char* verdict_name(Verdict verdict) {
  switch (verdict) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::NotApplicable: return "not_applicable";
  }
  return "unknown";
}

double geo_mean_a(const RVector& spectrum, double s) {
  check_scale(spectrum, s);
  const int m = static_cast<int>(spectrum.size());
  double sum_log = 0.0;
  for (int i = 0; i < m; ++i) sum_log += std::log(s - spectrum(i));
  return std::exp(sum_log / m);
}

double geo_mean_d(const RVector& spectrum, double s) {
  check_scale(spectrum, s);
  const int m = static_cast<int>(spectrum.size());
  double sum_log = 0.0;
  for (int i = 0; i < m; ++i) {
    if (!(spectrum(i) > 0.0)) {
      raise(Errc::ZeroEigenvalue,
            "geometric mean of lambda_i/(s-lambda_i)^2 needs a positive spectrum");
    }
    sum_log += std::log(spectrum(i)) - 2.0 * std::log(s - spectrum(i));
  }
  return std::exp(sum_log / m);
}

S1Check check_s1(const SpectralDecomposition& dec, const ScalePlan& plan) {
  const double e = std::numbers::e;
  const double c = plan.c_effective;
  const double lambda_max = dec.lambda_max();
  const double a = geo_mean_a(dec.spectrum, plan.s);
  const double threshold = lambda_max * c * c / e;

  S1Check out;
  out.l = threshold / a;
  out.verdict = (a >= threshold) ? Verdict::Holds : Verdict::Fails;
  const double chain = lambda_max * c * (1.0 - c / e);
  out.mean_bound = dec.lambda_mean() <= chain;
  out.scale_bound = chain <= kQuarterE;
  out.c_bound = c <= e * (1.0 + 1e-12);
  return out;
}

S2Check check_s2(const SpectralDecomposition& dec, const ScalePlan& plan) {
  S2Check out;
  const double lambda_max = dec.lambda_max();
  if (lambda_max < 1.0) {
    out.verdict = Verdict::NotApplicable;
    out.k = kNaN;
    return out;
  }
  const double e = std::numbers::e;
  const double c = plan.c_effective;
  const double a = geo_mean_a(dec.spectrum, plan.s);
  const double threshold = lambda_max * lambda_max * c * c / e;

  out.k = threshold / a;
  out.verdict = (a >= threshold) ? Verdict::Holds : Verdict::Fails;
  out.mean_bound = dec.lambda_mean() <= lambda_max * c * (1.0 - lambda_max * c / e);
  out.lambda_max_bound = lambda_max <= e / c;
  out.c_bound = c <= e * (1.0 + 1e-12);
  return out;
}

S3Check check_s3(const SpectralDecomposition& dec, const ScalePlan& plan) {
  if (!(dec.lambda_min() > 0.0)) {
    raise(Errc::ZeroEigenvalue, "S3 check needs a strictly positive spectrum");
  }
  const double d = geo_mean_d(dec.spectrum, plan.s);
  // lambda_max^4 c^4 = s^4, so the ratio reduces to s^4 d / (lambda_min^2 e^2).
  const double log_ratio =
      4.0 * std::log(plan.s) + std::log(d) - 2.0 * std::log(dec.lambda_min()) - 2.0;
  S3Check out;
  out.ratio = std::exp(log_ratio);
  out.verdict = (out.ratio <= 1.0) ? Verdict::Holds : Verdict::Fails;
  return out;
}

double permanent_upper_bound_log(const SpectralDecomposition& dec, const ScalePlan& plan) {
  const double a = geo_mean_a(dec.spectrum, plan.s);
  return dec.dim() * (2.0 * std::log(plan.s) - std::log(a) - 1.0);
}

double permanent_lower_bound_log(const SpectralDecomposition& dec) {
  if (!(dec.lambda_min() > 0.0)) return -kInf;
  const int m = dec.dim();
  double sum_log = 0.0;
  for (int i = 0; i < m; ++i) sum_log += std::log(dec.spectrum(i));
  return 2.0 * m * std::log(dec.lambda_min()) - sum_log;
}

RegimeReport analyze(const HpsmMatrix& mat, std::optional<double> c, bool attach_exact) {
  const SpectralDecomposition dec = spectral_decompose(mat);
  if (!(dec.lambda_max() > 0.0)) {
    raise(Errc::ZeroMatrix, "regime analysis needs lambda_max > 0");
  }
  const double c_arg = c ? *c : optimize_scale(dec);
  const ScalePlan plan = make_scale_plan(dec, c_arg);

  RegimeReport report;
  report.mean_lambda = dec.lambda_mean();
  report.c_used = plan.c_effective;
  report.a = geo_mean_a(dec.spectrum, plan.s);
  const bool positive_definite = dec.lambda_min() > 0.0;
  report.d = positive_definite ? geo_mean_d(dec.spectrum, plan.s) : kNaN;
  report.f = (positive_definite && dec.lambda_max() < 1.0) ? report.d : kNaN;

  report.s1 = check_s1(dec, plan);
  report.s2 = check_s2(dec, plan);
  if (positive_definite) {
    report.s3 = check_s3(dec, plan);
  } else {
    report.s3.verdict = Verdict::NotApplicable;
    report.s3.ratio = kNaN;
  }

  report.necessary_checks = {
      {"s1_mean_within_bound", report.s1.mean_bound},
      {"s1_bound_within_quarter_e", report.s1.scale_bound},
      {"s1_c_le_e", report.s1.c_bound},
  };
  if (report.s2.verdict != Verdict::NotApplicable) {
    report.necessary_checks.emplace_back("s2_mean_within_bound", report.s2.mean_bound);
    report.necessary_checks.emplace_back("s2_lambda_max_le_e_over_c",
                                         report.s2.lambda_max_bound);
    report.necessary_checks.emplace_back("s2_c_le_e", report.s2.c_bound);
  }

  report.upper_bound_log = permanent_upper_bound_log(dec, plan);
  report.lower_bound_log = permanent_lower_bound_log(dec);

  if (attach_exact && mat.dim() <= kAnalyzeExactMaxDim) {
    const double exact = permanent_ryser(mat.entries()).real();
    report.exact_permanent = exact;
    const double lower = std::exp(report.lower_bound_log);
    const double upper = std::exp(report.upper_bound_log);
    const double slack = std::max(1e-12, 1e-9 * std::abs(exact));
    if (!(lower <= exact + slack) || !(exact <= upper * (1.0 + 1e-9) + 1e-12)) {
      std::ostringstream oss;
      oss << "bound sandwich violated: lower " << lower << ", exact " << exact << ", upper "
          << upper;
      raise(Errc::NumericalFailure, oss.str());
    }
  }
  return report;
}

}  // namespace permest

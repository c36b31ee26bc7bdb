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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "permest/exact.hpp"
#include "permest/regimes.hpp"
#include "permest/spectra.hpp"
#include "test_helpers.hpp"

using namespace permest;
using test_helpers::raised_errc;

namespace {

constexpr double kE = std::numbers::e;

SpectralDecomposition make_dec(std::initializer_list<double> descending) {
  SpectralDecomposition dec;
  const int m = static_cast<int>(descending.size());
  dec.spectrum.resize(m);
  int i = 0;
  for (double value : descending) dec.spectrum(i++) = value;
  dec.unitary = CMatrix::Identity(m, m);
  return dec;
}

SpectralDecomposition spiked_dec(double top, int zeros) {
  SpectralDecomposition dec;
  dec.spectrum = RVector::Zero(zeros + 1);
  dec.spectrum(0) = top;
  dec.unitary = CMatrix::Identity(zeros + 1, zeros + 1);
  return dec;
}

RVector random_spectrum(int m, double lo, double hi, RngStream& rng) {
  RVector spectrum(m);
  for (int i = 0; i < m; ++i) spectrum(i) = lo + (hi - lo) * rng.next_double();
  std::sort(spectrum.data(), spectrum.data() + m, std::greater<double>());
  return spectrum;
}

}  // namespace

TEST_CASE("geo_mean_a direct evaluations") {
  CHECK(geo_mean_a(make_dec({0.5, 0.5}).spectrum, 1.0) == doctest::Approx(0.5).epsilon(1e-12));

  // identical eigenvalues: a = s - lambda
  CHECK(geo_mean_a(make_dec({0.3, 0.3, 0.3}).spectrum, 1.7) ==
        doctest::Approx(1.4).epsilon(1e-12));

  const SpectralDecomposition spiked = spiked_dec(1.2, 9);
  const double direct = std::exp((std::log(0.06) + 9.0 * std::log(1.26)) / 10.0);
  CHECK(geo_mean_a(spiked.spectrum, 1.26) == doctest::Approx(direct).epsilon(1e-12));
  CHECK(std::abs(geo_mean_a(spiked.spectrum, 1.26) - 0.929) <= 1e-3);

  CHECK(*raised_errc([] { geo_mean_a(make_dec({0.5}).spectrum, 0.4); }) == Errc::InvalidConfig);
}

TEST_CASE("geo_mean_d direct evaluations") {
  CHECK(geo_mean_d(make_dec({0.25, 0.25, 0.25}).spectrum, 1.0) ==
        doctest::Approx(4.0 / 9.0).epsilon(1e-12));
  CHECK(geo_mean_d(make_dec({0.2, 0.2}).spectrum, 1.0) ==
        doctest::Approx(0.3125).epsilon(1e-12));
  // single eigenvalue: d = lambda / (s - lambda)^2
  CHECK(geo_mean_d(make_dec({0.4}).spectrum, 1.3) ==
        doctest::Approx(0.4 / (0.9 * 0.9)).epsilon(1e-12));
  CHECK(*raised_errc([] { geo_mean_d(make_dec({0.5, 0.0}).spectrum, 1.0); }) ==
        Errc::ZeroEigenvalue);
}

TEST_CASE("check_s1 worked spectra") {
  SUBCASE("spiked 0.9 holds") {
    const SpectralDecomposition dec = spiked_dec(0.9, 9);
    const ScalePlan plan = make_scale_plan(dec, 2.0);  // unit-scale path
    const S1Check s1 = check_s1(dec, plan);
    CHECK(s1.verdict == Verdict::Holds);
    CHECK(std::abs(s1.l - 0.515) <= 1e-3);
    CHECK(s1.mean_bound);
    CHECK(s1.scale_bound);
    CHECK(s1.c_bound);
  }
  SUBCASE("flat half spectrum fails") {
    const SpectralDecomposition dec = make_dec({0.5, 0.5});
    const S1Check s1 = check_s1(dec, make_scale_plan(dec, 2.0));
    CHECK(s1.verdict == Verdict::Fails);
    CHECK(s1.l > 1.0);
  }
  SUBCASE("large eigenvalue mean fails") {
    // all eigenvalues 0.7: lambda_mean = 0.7 above the e/4 cap
    const SpectralDecomposition dec = make_dec({0.7, 0.7, 0.7});
    const S1Check s1 = check_s1(dec, make_scale_plan(dec, 2.0));
    CHECK(dec.lambda_mean() > kQuarterE);
    CHECK(!s1.mean_bound);
    CHECK(s1.verdict == Verdict::Fails);
  }
}

TEST_CASE("check_s2 worked spectra") {
  SUBCASE("spiked 1.2 with c = 1.05 holds") {
    const SpectralDecomposition dec = spiked_dec(1.2, 9);
    const ScalePlan plan = make_scale_plan(dec, 1.05);
    const S2Check s2 = check_s2(dec, plan);
    CHECK(s2.verdict == Verdict::Holds);
    CHECK(std::abs(s2.k - 0.629) <= 1e-3);
    CHECK(s2.mean_bound);
    CHECK(s2.lambda_max_bound);
    CHECK(s2.c_bound);
  }
  SUBCASE("lambda_max beyond e/c fails the necessary check") {
    const SpectralDecomposition dec = spiked_dec(2.8, 9);
    const S2Check s2 = check_s2(dec, make_scale_plan(dec, 1.05));
    CHECK(!s2.lambda_max_bound);
    CHECK(s2.verdict == Verdict::Fails);
  }
  SUBCASE("unit eigenvalue with c = 2 fails") {
    const SpectralDecomposition dec = make_dec({1.0});
    const S2Check s2 = check_s2(dec, make_scale_plan(dec, 2.0));
    CHECK(s2.verdict == Verdict::Fails);
    CHECK(s2.k == doctest::Approx(4.0 / kE).epsilon(1e-12));
  }
  SUBCASE("not applicable below lambda_max = 1") {
    const SpectralDecomposition dec = make_dec({0.5});
    const S2Check s2 = check_s2(dec, make_scale_plan(dec, 2.0));
    CHECK(s2.verdict == Verdict::NotApplicable);
  }
}

TEST_CASE("check_s3 worked spectra") {
  SUBCASE("flat quarter spectrum holds") {
    const SpectralDecomposition dec = make_dec({0.25, 0.25, 0.25});
    const S3Check s3 = check_s3(dec, make_scale_plan(dec, 2.0));
    CHECK(s3.verdict == Verdict::Holds);
    CHECK(std::abs(s3.ratio - 0.962) <= 1e-3);
  }
  SUBCASE("flat fifth spectrum fails") {
    const SpectralDecomposition dec = make_dec({0.2, 0.2});
    const S3Check s3 = check_s3(dec, make_scale_plan(dec, 2.0));
    CHECK(s3.verdict == Verdict::Fails);
    CHECK(s3.ratio > 1.0);
    CHECK(s3.ratio == doctest::Approx(0.3125 / (0.04 * kE * kE)).epsilon(1e-10));
  }
  SUBCASE("zero eigenvalue is rejected") {
    const SpectralDecomposition dec = make_dec({0.9, 0.0});
    const ScalePlan plan = make_scale_plan(dec, 2.0);
    CHECK(*raised_errc([&] { check_s3(dec, plan); }) == Errc::ZeroEigenvalue);
  }
}

TEST_CASE("the e/4 threshold rounds to 0.680") {
  CHECK(std::abs(kQuarterE - 0.680) <= 5e-4);
}

TEST_CASE("permanent bounds on hand-checked matrices") {
  SUBCASE("single mode at 0.5") {
    const SpectralDecomposition dec = make_dec({0.5});
    const ScalePlan plan = make_scale_plan(dec, 2.0);
    const double upper = std::exp(permanent_upper_bound_log(dec, plan));
    CHECK(upper == doctest::Approx(2.0 / kE).epsilon(1e-12));
    CHECK(upper >= 0.5);
  }
  SUBCASE("identity M=2 with c=2") {
    const SpectralDecomposition dec = make_dec({1.0, 1.0});
    const ScalePlan plan = make_scale_plan(dec, 2.0);
    const double upper = std::exp(permanent_upper_bound_log(dec, plan));
    CHECK(upper == doctest::Approx(16.0 / (kE * kE)).epsilon(1e-12));
    CHECK(upper >= 1.0);
  }
  SUBCASE("all-ones 3x3 with c=1.5") {
    const HpsmMatrix mat = validate_hpsm(CMatrix::Ones(3, 3));
    const SpectralDecomposition dec = spectral_decompose(mat);
    const ScalePlan plan = make_scale_plan(dec, 1.5);
    CHECK(std::exp(permanent_upper_bound_log(dec, plan)) >= 6.0);
  }
  SUBCASE("diagonal {2,3} lower bound") {
    const SpectralDecomposition dec = make_dec({3.0, 2.0});
    const double lower = std::exp(permanent_lower_bound_log(dec));
    CHECK(lower == doctest::Approx(16.0 / 6.0).epsilon(1e-12));
    CHECK(lower <= 6.0);
  }
  SUBCASE("flat spectrum lower bound is lambda^M") {
    const SpectralDecomposition dec = make_dec({0.4, 0.4, 0.4});
    CHECK(std::exp(permanent_lower_bound_log(dec)) ==
          doctest::Approx(std::pow(0.4, 3)).epsilon(1e-12));
  }
  SUBCASE("singular lower bound degenerates to zero") {
    const SpectralDecomposition dec = make_dec({0.9, 0.0});
    CHECK(permanent_lower_bound_log(dec) == -std::numeric_limits<double>::infinity());
  }
}

TEST_CASE("bound sandwich against the exact oracle") {
  RngStream rng(8080);
  for (int t = 0; t < 50; ++t) {
    const int m = 2 + t % 7;
    const RVector spectrum = random_spectrum(m, 0.05, 1.4, rng);
    const HpsmMatrix mat = gen_from_spectrum(spectrum, 5000 + static_cast<std::uint64_t>(t));
    const SpectralDecomposition dec = spectral_decompose(mat);
    const ScalePlan plan = make_scale_plan(dec, optimize_scale(dec));

    const double exact = permanent_ryser(mat.entries()).real();
    const double lower = std::exp(permanent_lower_bound_log(dec));
    const double upper = std::exp(permanent_upper_bound_log(dec, plan));
    CHECK(lower <= exact * (1.0 + 1e-9) + 1e-12);
    CHECK(exact <= upper * (1.0 + 1e-9) + 1e-12);
  }
}

TEST_CASE("a sits between its arithmetic-geometric bounds when rescaling") {
  RngStream rng(9090);
  for (int t = 0; t < 100; ++t) {
    const int m = 1 + t % 8;
    RVector spectrum = random_spectrum(m, 0.0, 1.0, rng);
    spectrum(0) = 1.0 + rng.next_double();  // force the rescale path
    std::sort(spectrum.data(), spectrum.data() + m, std::greater<double>());

    SpectralDecomposition dec;
    dec.spectrum = spectrum;
    dec.unitary = CMatrix::Identity(m, m);
    const double c = 1.0 + (kE - 1.0) * (0.05 + 0.9 * rng.next_double());
    const ScalePlan plan = make_scale_plan(dec, c);

    const double a = geo_mean_a(dec.spectrum, plan.s);
    const double lambda_max = dec.lambda_max();
    CHECK(lambda_max * (c - 1.0) <= a + 1e-9);
    CHECK(a <= c * lambda_max - dec.lambda_mean() + 1e-9);
  }
}

TEST_CASE("l and k live in [1/e, 1] whenever their conditions hold") {
  RngStream rng(111);
  int holds_seen = 0;
  for (int t = 0; t < 400; ++t) {
    const int m = 1 + t % 10;
    const double top = 0.2 + 2.0 * rng.next_double();
    RVector spectrum(m);
    spectrum(0) = top;
    for (int i = 1; i < m; ++i) spectrum(i) = top * rng.next_double() * rng.next_double();
    std::sort(spectrum.data(), spectrum.data() + m, std::greater<double>());

    SpectralDecomposition dec;
    dec.spectrum = spectrum;
    dec.unitary = CMatrix::Identity(m, m);
    const double c = 1.0 + (kE - 1.0) * (0.05 + 0.9 * rng.next_double());
    const ScalePlan plan = make_scale_plan(dec, c);

    const S1Check s1 = check_s1(dec, plan);
    if (s1.verdict == Verdict::Holds) {
      ++holds_seen;
      CHECK(s1.l <= 1.0 + 1e-12);
      CHECK(s1.l >= 1.0 / kE - 1e-12);
    }
    const S2Check s2 = check_s2(dec, plan);
    if (s2.verdict == Verdict::Holds) {
      CHECK(s2.k <= 1.0 + 1e-12);
      CHECK(s2.k >= 1.0 / kE - 1e-12);
    }
  }
  CHECK(holds_seen > 0);  // the generator must actually exercise the regime
}

TEST_CASE("necessary conditions are implied by the sufficient ones") {
  RngStream rng(222);
  for (int t = 0; t < 400; ++t) {
    const int m = 1 + t % 10;
    const double top = 0.2 + 2.0 * rng.next_double();
    RVector spectrum(m);
    spectrum(0) = top;
    for (int i = 1; i < m; ++i) spectrum(i) = top * rng.next_double() * rng.next_double();
    std::sort(spectrum.data(), spectrum.data() + m, std::greater<double>());

    SpectralDecomposition dec;
    dec.spectrum = spectrum;
    dec.unitary = CMatrix::Identity(m, m);
    const double c = 1.0 + (kE - 1.0) * (0.05 + 0.9 * rng.next_double());
    const ScalePlan plan = make_scale_plan(dec, c);

    const S1Check s1 = check_s1(dec, plan);
    if (s1.verdict == Verdict::Holds) {
      const double c_eff = plan.c_effective;
      const double chain = dec.lambda_max() * c_eff * (1.0 - c_eff / kE);
      CHECK(dec.lambda_mean() <= chain + 1e-9);
      CHECK(c_eff <= kE * (1.0 + 1e-12));
      // The e/4 cap on the chain value is additionally implied on the
      // unit-scale side of the split.
      if (dec.lambda_max() <= 1.0) CHECK(chain <= kQuarterE + 1e-12);
    }
    const S2Check s2 = check_s2(dec, plan);
    if (s2.verdict == Verdict::Holds) {
      CHECK(s2.mean_bound);
      CHECK(s2.lambda_max_bound);
      CHECK(s2.c_bound);
    }
  }
}

TEST_CASE("unit-scale path equals an explicit 1/lambda_max rescale") {
  const double lambda_max = 0.6;
  const SpectralDecomposition dec = make_dec({lambda_max, 0.4, 0.3});
  const ScalePlan unit = make_scale_plan(dec, 2.0);
  const ScalePlan forced = make_scale_plan(dec, 1.0 / lambda_max, /*force_rescale=*/true);

  CHECK(std::abs(unit.s - forced.s) <= 1e-12);
  CHECK(std::abs(unit.c_effective - forced.c_effective) <= 1e-12);
  CHECK(std::abs(unit.log_z - forced.log_z) <= 1e-12);

  const S1Check s1_unit = check_s1(dec, unit);
  const S1Check s1_forced = check_s1(dec, forced);
  CHECK(s1_unit.verdict == s1_forced.verdict);
  CHECK(std::abs(s1_unit.l - s1_forced.l) <= 1e-12);

  const S3Check s3_unit = check_s3(dec, unit);
  const S3Check s3_forced = check_s3(dec, forced);
  CHECK(s3_unit.verdict == s3_forced.verdict);
  CHECK(std::abs(s3_unit.ratio - s3_forced.ratio) <= 1e-12);
}

TEST_CASE("analyze aggregates the checks") {
  SUBCASE("flat quarter spectrum") {
    RVector spectrum(3);
    spectrum << 0.25, 0.25, 0.25;
    const HpsmMatrix mat = gen_from_spectrum(spectrum, 3);
    const RegimeReport report = analyze(mat);
    CHECK(report.s3.verdict == Verdict::Holds);
    CHECK(std::abs(report.s3.ratio - 0.962) <= 1e-3);
    CHECK(report.s1.verdict == Verdict::Fails);
    CHECK(report.s2.verdict == Verdict::NotApplicable);
    CHECK(report.exact_permanent.has_value());
    CHECK(std::isfinite(report.f));
  }
  SUBCASE("spiked 1.2 with c = 1.05") {
    RVector spectrum = RVector::Zero(10);
    spectrum(0) = 1.2;
    const HpsmMatrix mat = gen_from_spectrum(spectrum, 4);
    const RegimeReport report = analyze(mat, 1.05);
    CHECK(report.s2.verdict == Verdict::Holds);
    CHECK(std::abs(report.s2.k - 0.629) <= 1e-3);
    CHECK(report.s3.verdict == Verdict::NotApplicable);  // singular
    CHECK(report.lower_bound_log == -std::numeric_limits<double>::infinity());
    CHECK(report.necessary_checks.size() == 6);
  }
  SUBCASE("identity 3x3") {
    const HpsmMatrix mat = validate_hpsm(CMatrix::Identity(3, 3));
    const RegimeReport report = analyze(mat);
    REQUIRE(report.exact_permanent.has_value());
    CHECK(*report.exact_permanent == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::exp(report.lower_bound_log) <= 1.0 + 1e-9);
    CHECK(std::exp(report.upper_bound_log) >= 1.0 - 1e-9);
  }
  SUBCASE("zero matrix is rejected") {
    const HpsmMatrix mat = validate_hpsm(CMatrix::Zero(2, 2));
    CHECK(*raised_errc([&] { analyze(mat); }) == Errc::ZeroMatrix);
  }
}

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

#include <algorithm>
#include <cmath>

#include "permest/spectra.hpp"
#include "test_helpers.hpp"

using namespace permest;
using test_helpers::raised_errc;

namespace {

CMatrix real_matrix_2x2(double a, double b, double c, double d) {
  CMatrix mat(2, 2);
  mat << Complex(a, 0), Complex(b, 0), Complex(c, 0), Complex(d, 0);
  return mat;
}

double unitarity_defect(const CMatrix& u) {
  const CMatrix defect = u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols());
  return defect.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("validate_hpsm accepts the identity") {
  const HpsmMatrix mat = validate_hpsm(CMatrix::Identity(2, 2));
  const SpectralDecomposition dec = spectral_decompose(mat);
  CHECK(dec.spectrum(0) == doctest::Approx(1.0));
  CHECK(dec.spectrum(1) == doctest::Approx(1.0));
}

TEST_CASE("validate_hpsm rejects an indefinite matrix") {
  // [[1,2],[2,1]] has eigenvalues {3, -1}
  auto errc = raised_errc([] { validate_hpsm(real_matrix_2x2(1, 2, 2, 1)); });
  REQUIRE(errc.has_value());
  CHECK(*errc == Errc::NotPositiveSemidefinite);
}

TEST_CASE("validate_hpsm rejects a non-Hermitian matrix") {
  auto errc = raised_errc([] { validate_hpsm(real_matrix_2x2(0, 1, 0, 0)); });
  REQUIRE(errc.has_value());
  CHECK(*errc == Errc::NotHermitian);
}

TEST_CASE("validate_hpsm rejects non-square and non-finite input") {
  CHECK(*raised_errc([] { validate_hpsm(CMatrix::Zero(2, 3)); }) == Errc::NotSquare);

  CMatrix bad = CMatrix::Identity(2, 2);
  bad(0, 1) = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
  bad(1, 0) = bad(0, 1);
  CHECK(*raised_errc([&] { validate_hpsm(bad); }) == Errc::NonFiniteEntry);
}

TEST_CASE("validate_hpsm accepts the zero matrix") {
  const HpsmMatrix mat = validate_hpsm(CMatrix::Zero(3, 3));
  const SpectralDecomposition dec = spectral_decompose(mat);
  CHECK(dec.lambda_max() == 0.0);
  CHECK(dec.lambda_min() == 0.0);
}

TEST_CASE("validate_hpsm is idempotent") {
  const HpsmMatrix once = gen_random_hpsm(5, 0.9, 3);
  const HpsmMatrix twice = validate_hpsm(once.entries());
  CHECK(once.entries() == twice.entries());
}

TEST_CASE("spectral_decompose of a diagonal matrix") {
  CMatrix mat = CMatrix::Zero(2, 2);
  mat(0, 0) = 3.0;
  mat(1, 1) = 1.0;
  const SpectralDecomposition dec = spectral_decompose(validate_hpsm(mat));
  CHECK(dec.spectrum(0) == doctest::Approx(3.0));
  CHECK(dec.spectrum(1) == doctest::Approx(1.0));
  // Phase fixing pins U to the identity exactly up to rounding.
  CHECK((dec.unitary - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("spectral_decompose of the standard symmetric 2x2") {
  const SpectralDecomposition dec = spectral_decompose(validate_hpsm(real_matrix_2x2(2, 1, 1, 2)));
  CHECK(dec.spectrum(0) == doctest::Approx(3.0));
  CHECK(dec.spectrum(1) == doctest::Approx(1.0));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(dec.unitary(0, 0) - Complex(inv_sqrt2, 0)) <= 1e-12);
  CHECK(std::abs(dec.unitary(1, 0) - Complex(inv_sqrt2, 0)) <= 1e-12);
  CHECK(std::abs(dec.unitary(0, 1) - Complex(inv_sqrt2, 0)) <= 1e-12);
  CHECK(std::abs(dec.unitary(1, 1) - Complex(-inv_sqrt2, 0)) <= 1e-12);
}

TEST_CASE("spectral_decompose of the all-ones 3x3") {
  const SpectralDecomposition dec = spectral_decompose(validate_hpsm(CMatrix::Ones(3, 3)));
  CHECK(dec.spectrum(0) == doctest::Approx(3.0));
  CHECK(std::abs(dec.spectrum(1)) <= 1e-12);
  CHECK(std::abs(dec.spectrum(2)) <= 1e-12);
}

TEST_CASE("decomposition invariants: unitarity, reconstruction, trace, ordering") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int m = 1 + static_cast<int>(seed % 8);
    const HpsmMatrix mat = gen_random_hpsm(m, 0.5 + 0.1 * (seed % 9), seed);
    const SpectralDecomposition dec = spectral_decompose(mat);

    CHECK(unitarity_defect(dec.unitary) <= 1e-9);

    const CMatrix rebuilt =
        dec.unitary * dec.spectrum.cast<Complex>().asDiagonal() * dec.unitary.adjoint();
    const double recon = (rebuilt - mat.entries()).cwiseAbs().maxCoeff();
    CHECK(recon <= 1e-8 * std::max(1.0, dec.lambda_max()));

    const double trace = mat.entries().trace().real();
    CHECK(std::abs(trace - dec.spectrum.sum()) <= 1e-9 * std::max(1.0, trace));

    for (int i = 0; i + 1 < m; ++i) CHECK(dec.spectrum(i) >= dec.spectrum(i + 1));
    CHECK(dec.lambda_min() >= 0.0);
  }
}

TEST_CASE("spectral_decompose is deterministic") {
  const HpsmMatrix mat = gen_random_hpsm(6, 0.9, 17);
  const SpectralDecomposition a = spectral_decompose(mat);
  const SpectralDecomposition b = spectral_decompose(mat);
  CHECK(a.unitary == b.unitary);
  CHECK(a.spectrum == b.spectrum);
}

TEST_CASE("gen_from_spectrum round-trips the sorted spectrum") {
  RngStream meta(99);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int m = 1 + static_cast<int>(seed % 8);
    RVector spectrum(m);
    for (int i = 0; i < m; ++i) spectrum(i) = meta.next_double();
    const HpsmMatrix mat = gen_from_spectrum(spectrum, seed);
    const SpectralDecomposition dec = spectral_decompose(mat);

    std::sort(spectrum.data(), spectrum.data() + m, std::greater<double>());
    for (int i = 0; i < m; ++i) {
      CHECK(std::abs(dec.spectrum(i) - spectrum(i)) <= 1e-8);
    }
  }
}

TEST_CASE("gen_from_spectrum examples") {
  SUBCASE("flat spectrum") {
    RVector spectrum(3);
    spectrum << 0.25, 0.25, 0.25;
    const SpectralDecomposition dec = spectral_decompose(gen_from_spectrum(spectrum, 5));
    for (int i = 0; i < 3; ++i) CHECK(std::abs(dec.spectrum(i) - 0.25) <= 1e-10);
  }
  SUBCASE("rank one, trace preserved") {
    RVector spectrum(3);
    spectrum << 1.2, 0.0, 0.0;
    const HpsmMatrix mat = gen_from_spectrum(spectrum, 7);
    CHECK(std::abs(mat.entries().trace().real() - 1.2) <= 1e-10);
    const SpectralDecomposition dec = spectral_decompose(mat);
    CHECK(std::abs(dec.spectrum(0) - 1.2) <= 1e-10);
    CHECK(dec.spectrum(1) <= 1e-10);
  }
  SUBCASE("dimension one") {
    RVector spectrum(1);
    spectrum << 0.5;
    const HpsmMatrix mat = gen_from_spectrum(spectrum, 0);
    CHECK(std::abs(mat.entries()(0, 0) - Complex(0.5, 0)) <= 1e-12);
  }
  SUBCASE("negative entry rejected") {
    RVector spectrum(2);
    spectrum << 0.5, -0.1;
    CHECK(*raised_errc([&] { gen_from_spectrum(spectrum, 0); }) == Errc::NegativeSpectrumEntry);
  }
}

TEST_CASE("gen_random_hpsm examples") {
  SUBCASE("dimension one forces the value") {
    const HpsmMatrix mat = gen_random_hpsm(1, 0.7, 123);
    CHECK(std::abs(mat.entries()(0, 0) - Complex(0.7, 0)) <= 1e-12);
  }
  SUBCASE("lambda_max hits the target") {
    const SpectralDecomposition dec = spectral_decompose(gen_random_hpsm(4, 0.9, 1));
    CHECK(std::abs(dec.lambda_max() - 0.9) <= 1e-12);
  }
  SUBCASE("deterministic per seed") {
    const HpsmMatrix a = gen_random_hpsm(4, 0.9, 1);
    const HpsmMatrix b = gen_random_hpsm(4, 0.9, 1);
    CHECK(a.entries() == b.entries());
  }
}

TEST_CASE("haar_unitary columns are unitary") {
  RngStream rng(4);
  for (int m : {1, 2, 5, 9}) {
    const CMatrix u = haar_unitary(m, rng);
    CHECK(unitarity_defect(u) <= 1e-12);
  }
}

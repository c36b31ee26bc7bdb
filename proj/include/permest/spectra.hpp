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
#include <utility>

#include "permest/rng.hpp"
#include "permest/types.hpp"

namespace permest {

inline constexpr double kHermitianTol = 1e-10;  // relative to max |entry|
inline constexpr double kPsdTol = 1e-10;        // relative to lambda_max

// A validated Hermitian positive semidefinite matrix. Construction goes
// through validate_hpsm, which rejects non-Hermitian or indefinite input;
// the entries are stored exactly as given, so re-validation is a no-op.
class HpsmMatrix {
 public:
  int dim() const { return static_cast<int>(entries_.rows()); }
  const CMatrix& entries() const { return entries_; }

 private:
  friend HpsmMatrix validate_hpsm(const CMatrix& raw);
  explicit HpsmMatrix(CMatrix entries) : entries_(std::move(entries)) {}

  CMatrix entries_;
};

// Eigensystem of an HPSM. Columns of `unitary` are eigenvectors matching
// `spectrum`, which is sorted descending with negatives inside the PSD
// tolerance clamped to zero. Each eigenvector's phase is fixed (first
// non-negligible component made real positive) so the decomposition is a
// deterministic function of the input.
struct SpectralDecomposition {
  CMatrix unitary;
  RVector spectrum;

  int dim() const { return static_cast<int>(spectrum.size()); }
  double lambda_max() const { return spectrum(0); }
  double lambda_min() const { return spectrum(spectrum.size() - 1); }
  double lambda_mean() const { return spectrum.sum() / static_cast<double>(spectrum.size()); }
};

HpsmMatrix validate_hpsm(const CMatrix& raw);

SpectralDecomposition spectral_decompose(const HpsmMatrix& mat);

// Haar-distributed unitary: QR of a complex Ginibre matrix with the
// R-diagonal phase correction.
CMatrix haar_unitary(int m, RngStream& rng);

// U diag(spectrum) U^dagger for a Haar-random U drawn deterministically from
// the seed. The recovered sorted spectrum matches the (sorted) input to
// eigensolver accuracy.
HpsmMatrix gen_from_spectrum(const RVector& spectrum, std::uint64_t seed);

// Random HPSM: spectrum uniform in [0,1] rescaled so the top eigenvalue
// equals lambda_max_target, embedded via gen_from_spectrum.
HpsmMatrix gen_random_hpsm(int m, double lambda_max_target, std::uint64_t seed);

}  // namespace permest

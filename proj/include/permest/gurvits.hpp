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
#include <vector>

#include "permest/rng.hpp"
#include "permest/types.hpp"

namespace permest {

struct GurvitsResult {
  Complex estimate;
  std::uint64_t n_samples = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
};

// One Glynn term: (prod_i x_i) prod_i (sum_j x_j mat(j,i)) for a sign vector
// x in {-1,+1}^M with x_0 = +1 expected. Averaging over all 2^(M-1) sign
// vectors recovers the permanent exactly.
Complex glynn_term(const CMatrix& mat, const std::vector<int>& signs);

// A Glynn term for a uniformly random sign vector (x_0 pinned to +1).
Complex glynn_sample(const CMatrix& mat, RngStream& rng);

// ceil(2 ln(2/delta) / epsilon^2): sample count for the +-epsilon ||X||^M
// additive guarantee, ||X|| the spectral norm (lambda_max for HPSMs).
std::uint64_t gurvits_sample_count(double epsilon, double delta);

// prod_i sum_j |mat(j,i)|: per-sample magnitude bound used as a sampling
// sanity check.
double glynn_sample_bound(const CMatrix& mat);

// Randomized Gurvits/Glynn estimator. Same worker/stream partitioning
// contract as the coherent-state sampler: worker w draws from stream
// (seed, w) and partials merge in stream order.
GurvitsResult gurvits_estimate(const CMatrix& mat, double epsilon, double delta,
                               std::uint64_t seed, unsigned workers = 1);
GurvitsResult gurvits_estimate_serial(const CMatrix& mat, double epsilon, double delta,
                                      std::uint64_t seed, unsigned workers = 1);

}  // namespace permest

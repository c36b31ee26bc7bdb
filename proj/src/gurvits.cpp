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

#include "permest/gurvits.hpp"

#include <cmath>
#include <vector>

#include "permest/compensated.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace permest {
namespace {

void check_input(const CMatrix& mat) {
  if (mat.rows() != mat.cols() || mat.rows() < 1) {
    raise(Errc::NotSquare, "Glynn sampling needs a square matrix");
  }
  for (Eigen::Index i = 0; i < mat.rows(); ++i) {
    for (Eigen::Index j = 0; j < mat.cols(); ++j) {
      if (!std::isfinite(mat(i, j).real()) || !std::isfinite(mat(i, j).imag())) {
        raise(Errc::NonFiniteEntry, "matrix entry is not finite");
      }
    }
  }
}

Complex glynn_term_unchecked(const CMatrix& mat, const std::vector<int>& signs) {
  const int m = static_cast<int>(mat.rows());
  int sign_product = 1;
  for (int j = 0; j < m; ++j) sign_product *= signs[j];
  Complex product(static_cast<double>(sign_product), 0.0);
  for (int i = 0; i < m; ++i) {
    Complex column(0.0, 0.0);
    for (int j = 0; j < m; ++j) column += static_cast<double>(signs[j]) * mat(j, i);
    product *= column;
  }
  return product;
}

// Mean of the samples owned by one worker stream; same ownership rule as the
// coherent-state sampler.
Complex worker_sample_sum(const CMatrix& mat, std::uint64_t n, std::uint64_t seed,
                          unsigned workers, unsigned w, double bound) {
  const std::uint64_t quota = n / workers + (w < n % workers ? 1 : 0);
  RngStream rng(seed, w);
  const int m = static_cast<int>(mat.rows());
  std::vector<int> signs(m, 1);
  ComplexCompensatedSum<double> acc;
  for (std::uint64_t k = 0; k < quota; ++k) {
    for (int j = 1; j < m; ++j) signs[j] = rng.next_sign();
    const Complex value = glynn_term_unchecked(mat, signs);
    if (!(std::abs(value) <= bound * (1.0 + 1e-9) + 1e-300)) {
      raise(Errc::NumericalFailure, "Glynn sample magnitude above its column-sum bound");
    }
    acc.add(value);
  }
  return acc.value();
}

GurvitsResult run_estimate(const CMatrix& mat, double epsilon, double delta,
                           std::uint64_t seed, unsigned workers, bool parallel) {
  check_input(mat);
  if (workers == 0) raise(Errc::InvalidConfig, "workers must be positive");
  const std::uint64_t n = gurvits_sample_count(epsilon, delta);
  const double bound = glynn_sample_bound(mat);

  std::vector<Complex> partial(workers, Complex(0.0, 0.0));
  if (parallel) {
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::int64_t w = 0; w < static_cast<std::int64_t>(workers); ++w) {
      partial[static_cast<std::size_t>(w)] =
          worker_sample_sum(mat, n, seed, workers, static_cast<unsigned>(w), bound);
    }
  } else {
    for (unsigned w = 0; w < workers; ++w) {
      partial[w] = worker_sample_sum(mat, n, seed, workers, w, bound);
    }
  }

  ComplexCompensatedSum<double> total;
  for (const Complex& v : partial) total.add(v);

  GurvitsResult result;
  result.estimate = total.value() / static_cast<double>(n);
  result.n_samples = n;
  result.epsilon = epsilon;
  result.delta = delta;
  result.seed = seed;
  return result;
}

}  // namespace

Complex glynn_term(const CMatrix& mat, const std::vector<int>& signs) {
  check_input(mat);
  if (signs.size() != static_cast<std::size_t>(mat.rows())) {
    raise(Errc::DimensionMismatch, "sign vector length does not match the matrix");
  }
  return glynn_term_unchecked(mat, signs);
}

Complex glynn_sample(const CMatrix& mat, RngStream& rng) {
  check_input(mat);
  const int m = static_cast<int>(mat.rows());
  std::vector<int> signs(m, 1);
  for (int j = 1; j < m; ++j) signs[j] = rng.next_sign();
  return glynn_term_unchecked(mat, signs);
}

std::uint64_t gurvits_sample_count(double epsilon, double delta) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    raise(Errc::InvalidConfig, "epsilon must be positive and finite");
  }
  if (!(delta > 0.0 && delta < 1.0)) raise(Errc::InvalidConfig, "delta must lie in (0, 1)");
  const double n_real = std::ceil(2.0 * std::log(2.0 / delta) / (epsilon * epsilon));
  if (!(n_real < 9e18)) {
    raise(Errc::Overflow, "requested Glynn sample count does not fit a 64-bit counter");
  }
  return n_real < 1.0 ? 1 : static_cast<std::uint64_t>(n_real);
}

double glynn_sample_bound(const CMatrix& mat) {
  const int m = static_cast<int>(mat.rows());
  double bound = 1.0;
  for (int i = 0; i < m; ++i) {
    double column_abs = 0.0;
    for (int j = 0; j < m; ++j) column_abs += std::abs(mat(j, i));
    bound *= column_abs;
  }
  return bound;
}

GurvitsResult gurvits_estimate(const CMatrix& mat, double epsilon, double delta,
                               std::uint64_t seed, unsigned workers) {
  return run_estimate(mat, epsilon, delta, seed, workers, /*parallel=*/true);
}

GurvitsResult gurvits_estimate_serial(const CMatrix& mat, double epsilon, double delta,
                                      std::uint64_t seed, unsigned workers) {
  return run_estimate(mat, epsilon, delta, seed, workers, /*parallel=*/false);
}

}  // namespace permest

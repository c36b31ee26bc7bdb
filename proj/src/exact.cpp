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

#include "permest/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "permest/compensated.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace permest {
namespace {

using LComplex = std::complex<long double>;

void check_square(const CMatrix& mat, int max_dim) {
  if (mat.rows() != mat.cols()) raise(Errc::NotSquare, "permanent needs a square matrix");
  if (mat.rows() > max_dim) {
    raise(Errc::DimensionTooLarge, "dimension " + std::to_string(mat.rows()) +
                                       " exceeds the exact-method limit " +
                                       std::to_string(max_dim));
  }
}

// Sum over column subsets S encoded by Gray codes of k in [k_lo, k_hi) of
// (-1)^|S| prod_i (row sums over S); the caller applies the global (-1)^M.
LComplex ryser_range(const CMatrix& mat, std::uint64_t k_lo, std::uint64_t k_hi) {
  const int m = static_cast<int>(mat.rows());
  std::vector<LComplex> row_sums(m, LComplex(0.0L, 0.0L));
  std::uint64_t gray = k_lo ^ (k_lo >> 1);
  for (int b = 0; b < m; ++b) {
    if ((gray >> b) & 1) {
      for (int i = 0; i < m; ++i) row_sums[i] += LComplex(mat(i, b));
    }
  }
  bool odd = std::popcount(gray) & 1;

  ComplexCompensatedSum<long double> acc;
  for (std::uint64_t k = k_lo; k < k_hi; ++k) {
    if (k != k_lo) {
      const int b = std::countr_zero(k);
      const std::uint64_t bit = std::uint64_t{1} << b;
      gray ^= bit;
      const long double step = (gray & bit) ? 1.0L : -1.0L;
      for (int i = 0; i < m; ++i) row_sums[i] += step * LComplex(mat(i, b));
      odd = !odd;
    }
    LComplex product(1.0L, 0.0L);
    for (int i = 0; i < m; ++i) product *= row_sums[i];
    acc.add(odd ? -product : product);
  }
  return acc.value();
}

// Sum over Glynn sign vectors encoded by Gray codes of k in [k_lo, k_hi);
// bit b set means x_{b+1} = -1, x_0 is pinned to +1.
LComplex glynn_range(const CMatrix& mat, std::uint64_t k_lo, std::uint64_t k_hi) {
  const int m = static_cast<int>(mat.rows());
  std::uint64_t gray = k_lo ^ (k_lo >> 1);
  std::vector<LComplex> col_sums(m, LComplex(0.0L, 0.0L));
  for (int i = 0; i < m; ++i) {
    LComplex sum(0.0L, 0.0L);
    for (int j = 0; j < m; ++j) {
      const long double x = (j > 0 && ((gray >> (j - 1)) & 1)) ? -1.0L : 1.0L;
      sum += x * LComplex(mat(j, i));
    }
    col_sums[i] = sum;
  }
  bool odd = std::popcount(gray) & 1;  // parity of -1 signs = sign of prod x

  ComplexCompensatedSum<long double> acc;
  for (std::uint64_t k = k_lo; k < k_hi; ++k) {
    if (k != k_lo) {
      const int b = std::countr_zero(k);
      const std::uint64_t bit = std::uint64_t{1} << b;
      gray ^= bit;
      const long double delta = (gray & bit) ? -2.0L : 2.0L;
      const int row = b + 1;
      for (int i = 0; i < m; ++i) col_sums[i] += delta * LComplex(mat(row, i));
      odd = !odd;
    }
    LComplex product(1.0L, 0.0L);
    for (int i = 0; i < m; ++i) product *= col_sums[i];
    acc.add(odd ? -product : product);
  }
  return acc.value();
}

Complex to_complex(const LComplex& v) {
  return Complex(static_cast<double>(v.real()), static_cast<double>(v.imag()));
}

template <typename RangeFn>
LComplex partitioned_sum(const CMatrix& mat, std::uint64_t begin, std::uint64_t end,
                         unsigned workers, RangeFn range_fn) {
  const std::uint64_t count = end - begin;
  const std::uint64_t parts = std::min<std::uint64_t>(std::max(workers, 1u), count);
  std::vector<LComplex> partial(parts);
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic)
#endif
  for (std::int64_t p = 0; p < static_cast<std::int64_t>(parts); ++p) {
    const std::uint64_t lo = begin + count * static_cast<std::uint64_t>(p) / parts;
    const std::uint64_t hi = begin + count * (static_cast<std::uint64_t>(p) + 1) / parts;
    partial[static_cast<std::size_t>(p)] = range_fn(mat, lo, hi);
  }
  ComplexCompensatedSum<long double> acc;
  for (const auto& v : partial) acc.add(v);
  return acc.value();
}

}  // namespace

ExactMethod parse_exact_method(const std::string& name) {
  if (name == "naive") return ExactMethod::Naive;
  if (name == "ryser") return ExactMethod::Ryser;
  if (name == "glynn") return ExactMethod::GlynnExact;
  raise(Errc::InvalidConfig, "unknown exact method '" + name + "'");
}

const char* exact_method_name(ExactMethod method) {
  switch (method) {
    case ExactMethod::Naive: return "naive";
    case ExactMethod::Ryser: return "ryser";
    case ExactMethod::GlynnExact: return "glynn";
  }
  return "unknown";
}

Complex permanent_naive(const CMatrix& mat) {
  check_square(mat, kNaiveMaxDim);
  const int m = static_cast<int>(mat.rows());
  if (m == 0) return Complex(1.0, 0.0);

  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  ComplexCompensatedSum<long double> acc;
  do {
    LComplex product(1.0L, 0.0L);
    for (int i = 0; i < m; ++i) product *= LComplex(mat(i, perm[i]));
    acc.add(product);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return to_complex(acc.value());
}

Complex permanent_ryser_serial(const CMatrix& mat) {
  check_square(mat, kExactMaxDim);
  const int m = static_cast<int>(mat.rows());
  if (m == 0) return Complex(1.0, 0.0);
  LComplex total = ryser_range(mat, 1, std::uint64_t{1} << m);
  if (m % 2) total = -total;
  return to_complex(total);
}

Complex permanent_ryser(const CMatrix& mat, unsigned workers) {
  check_square(mat, kExactMaxDim);
  const int m = static_cast<int>(mat.rows());
  if (m == 0) return Complex(1.0, 0.0);
  LComplex total = partitioned_sum(mat, 1, std::uint64_t{1} << m, workers, ryser_range);
  if (m % 2) total = -total;
  return to_complex(total);
}

Complex permanent_glynn_exact_serial(const CMatrix& mat) {
  check_square(mat, kExactMaxDim);
  const int m = static_cast<int>(mat.rows());
  if (m == 0) return Complex(1.0, 0.0);
  const LComplex total = glynn_range(mat, 0, std::uint64_t{1} << (m - 1));
  const long double scale = ldexpl(1.0L, 1 - m);  // 2^(1-M)
  return to_complex(total * scale);
}

Complex permanent_glynn_exact(const CMatrix& mat, unsigned workers) {
  check_square(mat, kExactMaxDim);
  const int m = static_cast<int>(mat.rows());
  if (m == 0) return Complex(1.0, 0.0);
  const LComplex total =
      partitioned_sum(mat, 0, std::uint64_t{1} << (m - 1), workers, glynn_range);
  const long double scale = ldexpl(1.0L, 1 - m);
  return to_complex(total * scale);
}

Complex permanent_exact(const CMatrix& mat, ExactMethod method, unsigned workers) {
  switch (method) {
    case ExactMethod::Naive: return permanent_naive(mat);
    case ExactMethod::Ryser: return permanent_ryser(mat, workers);
    case ExactMethod::GlynnExact: return permanent_glynn_exact(mat, workers);
  }
  raise(Errc::InvalidConfig, "unknown exact method");
}

}  // namespace permest

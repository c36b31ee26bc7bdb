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

#include <cmath>
#include <complex>

namespace permest {

// Neumaier-compensated accumulation; survives alternating-sign sums where a
// naive accumulator loses digits.
template <typename Real>
struct CompensatedSum {
  Real sum{0};
  Real compensation{0};

  void add(Real value) {
    const Real t = sum + value;
    if (std::abs(sum) >= std::abs(value)) {
      compensation += (sum - t) + value;
    } else {
      compensation += (value - t) + sum;
    }
    sum = t;
  }

  Real value() const { return sum + compensation; }
};

template <typename Real>
struct ComplexCompensatedSum {
  CompensatedSum<Real> re;
  CompensatedSum<Real> im;

  void add(const std::complex<Real>& value) {
    re.add(value.real());
    im.add(value.imag());
  }

  std::complex<Real> value() const { return {re.value(), im.value()}; }
};

}  // namespace permest

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

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace permest {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Failure classes surfaced by the library. The CLI maps them onto process
// exit codes: invalid input or config -> 2, unsatisfied sampling regime -> 3,
// numerical failure or exceeded sample cap -> 4.
enum class Errc {
  NotSquare,
  NotHermitian,
  NotPositiveSemidefinite,
  NonFiniteEntry,
  NegativeSpectrumEntry,
  ConvergenceFailure,
  ZeroMatrix,
  InvalidC,
  ZeroEigenvalue,
  DimensionTooLarge,
  DimensionMismatch,
  RegimeNotSatisfied,
  Overflow,
  IoError,
  ParseError,
  InvalidConfig,
  NumericalFailure,
};

const char* errc_name(Errc errc);
int exit_code(Errc errc);

class Error : public std::runtime_error {
 public:
  Error(Errc errc, const std::string& message)
      : std::runtime_error(std::string(errc_name(errc)) + ": " + message), errc_(errc) {}

  Errc errc() const noexcept { return errc_; }

 private:
  Errc errc_;
};

[[noreturn]] inline void raise(Errc errc, const std::string& message) { throw Error(errc, message); }

}  // namespace permest

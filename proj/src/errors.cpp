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

#include "permest/types.hpp"

namespace permest {

const char* errc_name(Errc errc) {
  switch (errc) {
    case Errc::NotSquare: return "NotSquare";
    case Errc::NotHermitian: return "NotHermitian";
    case Errc::NotPositiveSemidefinite: return "NotPositiveSemidefinite";
    case Errc::NonFiniteEntry: return "NonFiniteEntry";
    case Errc::NegativeSpectrumEntry: return "NegativeSpectrumEntry";
    case Errc::ConvergenceFailure: return "ConvergenceFailure";
    case Errc::ZeroMatrix: return "ZeroMatrix";
    case Errc::InvalidC: return "InvalidC";
    case Errc::ZeroEigenvalue: return "ZeroEigenvalue";
    case Errc::DimensionTooLarge: return "DimensionTooLarge";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::RegimeNotSatisfied: return "RegimeNotSatisfied";
    case Errc::Overflow: return "Overflow";
    case Errc::IoError: return "IoError";
    case Errc::ParseError: return "ParseError";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::NumericalFailure: return "NumericalFailure";
  }
  return "UnknownError";
}

int exit_code(Errc errc) {
  switch (errc) {
    case Errc::RegimeNotSatisfied:
      return 3;
    case Errc::ConvergenceFailure:
    case Errc::Overflow:
    case Errc::NumericalFailure:
      return 4;
    default:
      return 2;
  }
}

}  // namespace permest

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

#include <string>

#include "permest/types.hpp"

namespace permest {

enum class ExactMethod { Naive, Ryser, GlynnExact };

ExactMethod parse_exact_method(const std::string& name);  // "naive" | "ryser" | "glynn"
const char* exact_method_name(ExactMethod method);

inline constexpr int kNaiveMaxDim = 10;
inline constexpr int kExactMaxDim = 24;

// Permutation-sum definition of the permanent; the base oracle every other
// routine is checked against. O(M! M).
Complex permanent_naive(const CMatrix& mat);

// Ryser inclusion-exclusion over column subsets with Gray-code updates,
// O(2^M M). The `workers` version splits the subset range into that many
// partitions, each with its own compensated accumulator, combined in
// partition order; the serial version is the single-sweep reference.
Complex permanent_ryser(const CMatrix& mat, unsigned workers = 1);
Complex permanent_ryser_serial(const CMatrix& mat);

// Glynn 2^(M-1)-term sign-vector expansion, Gray-coded, same partitioning
// contract as Ryser.
Complex permanent_glynn_exact(const CMatrix& mat, unsigned workers = 1);
Complex permanent_glynn_exact_serial(const CMatrix& mat);

Complex permanent_exact(const CMatrix& mat, ExactMethod method, unsigned workers = 1);

}  // namespace permest

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

#include <json.hpp>

#include "permest/spectra.hpp"
#include "permest/types.hpp"

namespace permest {

// 17 significant digits (full round-trip precision); non-finite values
// render as inf / -inf / nan.
std::string format_double(double value);

// Matrix file format: {"m": M, "entries": [[[re, im], ...], ...]} row-major.
nlohmann::ordered_json matrix_to_json(const CMatrix& mat);

// Structural validation with field locations in the error message.
CMatrix matrix_from_json(const nlohmann::json& doc);

// Parse + validate_hpsm; write-then-read round-trips bit-identically.
HpsmMatrix read_matrix_file(const std::string& path);
void write_matrix_file(const std::string& path, const CMatrix& mat);

// Serializer shared by matrix files and run reports: doubles at 17
// significant digits, non-finite numbers as quoted strings, arrays of
// scalars on one line.
std::string dump_json(const nlohmann::ordered_json& doc, int indent = 2);

}  // namespace permest

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

#include "permest/matrix_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace permest {
namespace {

std::string cell_location(int i, int j) {
  std::ostringstream oss;
  oss << "entries[" << i << "][" << j << "]";
  return oss.str();
}

bool is_scalar(const nlohmann::ordered_json& v) {
  return v.is_primitive();  // null, bool, string, number
}

void dump_value(const nlohmann::ordered_json& v, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent) * depth, ' ');
  const std::string pad_in(static_cast<std::size_t>(indent) * (depth + 1), ' ');
  switch (v.type()) {
    case nlohmann::json::value_t::null:
      out += "null";
      break;
    case nlohmann::json::value_t::boolean:
      out += v.get<bool>() ? "true" : "false";
      break;
    case nlohmann::json::value_t::string:
      out += nlohmann::json(v.get<std::string>()).dump();
      break;
    case nlohmann::json::value_t::number_integer:
    case nlohmann::json::value_t::number_unsigned:
      out += v.dump();
      break;
    case nlohmann::json::value_t::number_float: {
      const double d = v.get<double>();
      if (std::isfinite(d)) {
        out += format_double(d);
      } else {
        out += '"';
        out += format_double(d);
        out += '"';
      }
      break;
    }
    case nlohmann::json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        break;
      }
      bool flat = true;
      for (const auto& item : v) {
        if (!is_scalar(item)) {
          flat = false;
          break;
        }
      }
      if (flat) {
        out += '[';
        bool first = true;
        for (const auto& item : v) {
          if (!first) out += ", ";
          first = false;
          dump_value(item, out, indent, depth + 1);
        }
        out += ']';
      } else {
        out += "[\n";
        bool first = true;
        for (const auto& item : v) {
          if (!first) out += ",\n";
          first = false;
          out += pad_in;
          dump_value(item, out, indent, depth + 1);
        }
        out += '\n';
        out += pad;
        out += ']';
      }
      break;
    }
    case nlohmann::json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        out += nlohmann::json(it.key()).dump();
        out += ": ";
        dump_value(it.value(), out, indent, depth + 1);
      }
      out += '\n';
      out += pad;
      out += '}';
      break;
    }
    default:
      out += "null";
      break;
  }
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string dump_json(const nlohmann::ordered_json& doc, int indent) {
  std::string out;
  dump_value(doc, out, indent, 0);
  return out;
}

nlohmann::ordered_json matrix_to_json(const CMatrix& mat) {
  nlohmann::ordered_json doc;
  doc["m"] = static_cast<int>(mat.rows());
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < mat.rows(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (Eigen::Index j = 0; j < mat.cols(); ++j) {
      row.push_back({mat(i, j).real(), mat(i, j).imag()});
    }
    rows.push_back(std::move(row));
  }
  doc["entries"] = std::move(rows);
  return doc;
}

CMatrix matrix_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) raise(Errc::ParseError, "top-level value must be an object");
  if (!doc.contains("m")) raise(Errc::ParseError, "missing field 'm'");
  if (!doc["m"].is_number_integer()) raise(Errc::ParseError, "field 'm' must be an integer");
  const long long m_raw = doc["m"].get<long long>();
  if (m_raw < 1 || m_raw > 100000) {
    raise(Errc::ParseError, "field 'm' must be a positive matrix dimension");
  }
  const int m = static_cast<int>(m_raw);
  if (!doc.contains("entries")) raise(Errc::ParseError, "missing field 'entries'");
  const auto& entries = doc["entries"];
  if (!entries.is_array() || static_cast<int>(entries.size()) != m) {
    raise(Errc::ParseError, "field 'entries' must be an array of " + std::to_string(m) + " rows");
  }

  CMatrix mat(m, m);
  for (int i = 0; i < m; ++i) {
    const auto& row = entries[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != m) {
      raise(Errc::ParseError,
            "entries[" + std::to_string(i) + "] must be an array of " + std::to_string(m) +
                " [re, im] pairs");
    }
    for (int j = 0; j < m; ++j) {
      const auto& cell = row[static_cast<std::size_t>(j)];
      if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() || !cell[1].is_number()) {
        raise(Errc::ParseError, cell_location(i, j) + " must be a [re, im] number pair");
      }
      mat(i, j) = Complex(cell[0].get<double>(), cell[1].get<double>());
    }
  }
  return mat;
}

HpsmMatrix read_matrix_file(const std::string& path) {
  std::ifstream stream(path);
  if (!stream) raise(Errc::IoError, "cannot open '" + path + "' for reading");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(stream);
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::ParseError, path + ": " + e.what());
  }
  return validate_hpsm(matrix_from_json(doc));
}

void write_matrix_file(const std::string& path, const CMatrix& mat) {
  std::ofstream stream(path);
  if (!stream) raise(Errc::IoError, "cannot open '" + path + "' for writing");
  stream << dump_json(matrix_to_json(mat)) << '\n';
  if (!stream) raise(Errc::IoError, "failed writing '" + path + "'");
}

}  // namespace permest

// Copyright 2026 The theta-forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "theta_forge/io.hpp"

#include <cmath>
#include <string>

#include <nlohmann/json.hpp>
#include "theta_forge/errors.hpp"

namespace theta_forge {
namespace {

using nlohmann::json;

json parse_document(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("invalid JSON", e.byte == 0 ? 1 : e.byte);
  }
}

int read_genus(const json& doc) {
  if (!doc.is_object()) throw ParseError("expected a JSON object", 1);
  if (!doc.contains("g") || !doc["g"].is_number_integer()) throw ParseError("missing integer field \"g\"", 1);
  const int g = doc["g"].get<int>();
  if (g < 1 || g > 16) throw DomainError("genus out of range: " + std::to_string(g));
  return g;
}

template <class T, class Check>
Matrix<T> read_matrix(const json& doc, const char* key, int genus, Check is_entry) {
  if (!doc.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"", 1);
  const json& field = doc[key];
  if (!field.is_array()) throw ParseError(std::string("field \"") + key + "\" must be an array", 1);
  const auto g = static_cast<std::size_t>(genus);
  json flat = json::array();
  if (field.size() == g && field[0].is_array()) {
    for (const auto& row : field) {
      if (!row.is_array() || row.size() != g)
        throw ParseError(std::string("field \"") + key + "\" must be " + std::to_string(g) + " x " + std::to_string(g), 1);
      for (const auto& x : row) flat.push_back(x);
    }
  } else {
    flat = field;
  }
  if (flat.size() != g * g)
    throw ParseError(std::string("field \"") + key + "\" must hold " + std::to_string(g * g) + " entries", 1);
  Matrix<T> m(g, g);
  for (std::size_t i = 0; i < g * g; ++i) {
    if (!is_entry(flat[i])) throw ParseError(std::string("bad entry in field \"") + key + "\"", 1);
    m(i / g, i % g) = flat[i].get<T>();
  }
  return m;
}

template <class T>
json write_matrix(const Matrix<T>& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

SiegelPoint siegel_point_from_json(std::string_view text) {
  const json doc = parse_document(text);
  const int g = read_genus(doc);
  auto is_real = [](const json& x) { return x.is_number() && std::isfinite(x.get<double>()); };
  const RealMatrix re = read_matrix<double>(doc, "re", g, is_real);
  const RealMatrix im = read_matrix<double>(doc, "im", g, is_real);
  ComplexMatrix tau(re.rows(), re.cols());
  for (std::size_t r = 0; r < re.rows(); ++r)
    for (std::size_t c = 0; c < re.cols(); ++c) tau(r, c) = Complex(re(r, c), im(r, c));
  return SiegelPoint::make(tau);
}

std::string to_json(const SiegelPoint& tau) {
  json doc;
  doc["g"] = tau.genus();
  doc["re"] = write_matrix(tau.real());
  doc["im"] = write_matrix(tau.imag());
  return doc.dump();
}

SymplecticElement symplectic_from_json(std::string_view text) {
  const json doc = parse_document(text);
  const int g = read_genus(doc);
  auto is_int = [](const json& x) { return x.is_number_integer(); };
  return SymplecticElement::from_blocks(read_matrix<std::int64_t>(doc, "a", g, is_int),
                                        read_matrix<std::int64_t>(doc, "b", g, is_int),
                                        read_matrix<std::int64_t>(doc, "c", g, is_int),
                                        read_matrix<std::int64_t>(doc, "d", g, is_int));
}

std::string to_json(const SymplecticElement& gamma) {
  json doc;
  doc["g"] = gamma.genus();
  doc["a"] = write_matrix(gamma.a());
  doc["b"] = write_matrix(gamma.b());
  doc["c"] = write_matrix(gamma.c());
  doc["d"] = write_matrix(gamma.d());
  return doc.dump();
}

}  // namespace theta_forge

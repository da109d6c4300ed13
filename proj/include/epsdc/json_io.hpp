// Copyright 2026 The epsdc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "epsdc/errors.hpp"
#include "epsdc/max_affine.hpp"
#include "epsdc/vec.hpp"

// JSON interchange for functions and point sets.
//
//   function: {"dim": n, "pieces": [{"a": [n floats], "b": float}, ...]}
//   points:   {"dim": n, "points": [[n floats], ...]}
//
// Doubles are written in shortest round-trip form.

namespace epsdc {

using Json = nlohmann::ordered_json;

namespace detail {

inline const Json& require_field(const Json& obj, const std::string& key,
                                 const std::string& path) {
  if (!obj.is_object()) throw ParseError(path + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path + "." + key + ": missing field");
  return *it;
}

inline double require_number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(path + ": number is not finite");
  return v;
}

inline std::size_t require_dim(const Json& root) {
  const Json& d = require_field(root, "dim", "$");
  if (!d.is_number_integer() || d.get<long long>() <= 0) {
    throw ParseError("$.dim: expected a positive integer");
  }
  return static_cast<std::size_t>(d.get<long long>());
}

inline Json parse_text(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  } catch (const nlohmann::json::out_of_range& e) {
    throw ParseError(std::string("number out of range: ") + e.what());
  }
}

}  // namespace detail

inline Vec vec_from_json(const Json& j, std::size_t expected_len, const std::string& path) {
  if (!j.is_array()) throw ParseError(path + ": expected an array");
  if (j.size() != expected_len) {
    throw ParseError(path + ": expected length " + std::to_string(expected_len) + ", got " +
                     std::to_string(j.size()));
  }
  Vec v(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    v[k] = detail::require_number(j[k], path + "[" + std::to_string(k) + "]");
  }
  return v;
}

// Parses a bare JSON array of numbers of any length, e.g. "[1, -2.5]".
inline Vec parse_vector(std::string_view text) {
  const Json j = detail::parse_text(text);
  if (!j.is_array()) throw ParseError("$: expected an array of numbers");
  return vec_from_json(j, j.size(), "$");
}

inline MaxAffine max_affine_from_json(const Json& root) {
  const std::size_t dim = detail::require_dim(root);
  const Json& arr = detail::require_field(root, "pieces", "$");
  if (!arr.is_array()) throw ParseError("$.pieces: expected an array");
  if (arr.empty()) throw ParseError("$.pieces: must be nonempty");
  std::vector<Piece> pieces;
  pieces.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string path = "$.pieces[" + std::to_string(i) + "]";
    Piece p;
    p.a = vec_from_json(detail::require_field(arr[i], "a", path), dim, path + ".a");
    p.b = detail::require_number(detail::require_field(arr[i], "b", path), path + ".b");
    pieces.push_back(std::move(p));
  }
  return MaxAffine(dim, std::move(pieces));
}

inline PointSet point_set_from_json(const Json& root) {
  const std::size_t dim = detail::require_dim(root);
  const Json& arr = detail::require_field(root, "points", "$");
  if (!arr.is_array()) throw ParseError("$.points: expected an array");
  std::vector<Vec> pts;
  pts.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    pts.push_back(vec_from_json(arr[i], dim, "$.points[" + std::to_string(i) + "]"));
  }
  return PointSet(dim, std::move(pts));
}

inline MaxAffine parse_max_affine(std::string_view text) {
  return max_affine_from_json(detail::parse_text(text));
}

inline PointSet parse_point_set(std::string_view text) {
  return point_set_from_json(detail::parse_text(text));
}

inline Json to_json(const Vec& v) {
  Json j = Json::array();
  for (double t : v) j.push_back(t);
  return j;
}

inline Json to_json(const MaxAffine& f) {
  Json pieces = Json::array();
  for (const Piece& p : f.pieces()) {
    Json jp;
    jp["a"] = to_json(p.a);
    jp["b"] = p.b;
    pieces.push_back(std::move(jp));
  }
  Json j;
  j["dim"] = f.dim();
  j["pieces"] = std::move(pieces);
  return j;
}

inline Json to_json(const PointSet& p) {
  Json pts = Json::array();
  for (const Vec& v : p.points) pts.push_back(to_json(v));
  Json j;
  j["dim"] = p.dim;
  j["points"] = std::move(pts);
  return j;
}

inline std::string serialize(const MaxAffine& f) { return to_json(f).dump(); }
inline std::string serialize(const PointSet& p) { return to_json(p).dump(); }

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline MaxAffine load_max_affine(const std::string& path) {
  try {
    return parse_max_affine(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline PointSet load_point_set(const std::string& path) {
  try {
    return parse_point_set(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace epsdc

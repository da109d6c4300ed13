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

#include <optional>
#include <string>
#include <vector>

#include "epsdc/certify.hpp"
#include "epsdc/json_io.hpp"
#include "epsdc/oracle.hpp"

// JSON documents emitted by the command-line tool. Key order is fixed.

namespace epsdc {

template <typename T>
Json optional_json(const std::optional<T>& v) {
  if (!v) return nullptr;
  if constexpr (std::is_same_v<T, Vec>) {
    return to_json(*v);
  } else {
    return Json(*v);
  }
}

inline Json to_json(const CheckResult& r) {
  Json j;
  j["condition"] = std::string(to_string(r.condition));
  j["x"] = to_json(r.x);
  j["epsilon"] = r.epsilon;
  j["verdict"] = r.verdict;
  j["witness"] = optional_json(r.witness);
  j["value"] = optional_json(r.value);
  return j;
}

inline Json to_json(const oracle::CellWitness& w) {
  Json j;
  j["pair"] = Json::array({w.f_piece, w.g_piece});
  j["gradient_gap"] = w.gradient_gap;
  j["interior_point"] = to_json(w.interior_point);
  j["margin"] = w.margin;
  return j;
}

inline Json to_json(const CertReport& rep) {
  Json j;
  j["overall"] = std::string(to_string(rep.overall));
  Json results = Json::array();
  for (const CheckResult& r : rep.results) results.push_back(to_json(r));
  j["results"] = std::move(results);
  if (rep.refutation) {
    Json ref;
    ref["x"] = to_json(rep.refutation->x);
    ref["epsilon"] = rep.refutation->epsilon;
    ref["condition"] = std::string(to_string(rep.refutation->condition));
    ref["detail"] = rep.refutation->detail;
    j["refutation"] = std::move(ref);
  } else {
    j["refutation"] = nullptr;
  }
  j["scope"] = rep.global ? "global" : "grid";
  if (rep.exact) {
    Json ex;
    ex["lipschitz"] = rep.exact->lipschitz;
    ex["k_sufficient"] = rep.exact->k_sufficient;
    ex["witness"] = to_json(rep.exact->witness);
    j["exact"] = std::move(ex);
  }
  return j;
}

inline Json to_json(const ChainCertificate& c) {
  Json j;
  j["x"] = to_json(c.x);
  j["y"] = to_json(c.y);
  j["m"] = c.m;
  j["epsilon"] = c.epsilon;
  j["gamma_m"] = c.gamma_m;
  j["link_epsilon"] = c.link_epsilon;
  Json pts = Json::array();
  for (const Vec& p : c.chain_points) pts.push_back(to_json(p));
  j["chain_points"] = std::move(pts);
  j["u_star"] = to_json(c.u_star);
  j["v_star"] = to_json(c.v_star);
  Json links = Json::array();
  for (const ChainLink& l : c.links) {
    Json jl;
    jl["point"] = to_json(l.point);
    jl["u"] = to_json(l.u);
    jl["v"] = to_json(l.v);
    jl["w"] = to_json(l.w);
    links.push_back(std::move(jl));
  }
  j["triples"] = std::move(links);
  j["bound_value"] = optional_json(c.bound_value);
  j["actual_value"] = c.actual_value;
  j["feasible"] = c.feasible;
  j["failure_index"] = optional_json(c.failure_index);
  return j;
}

inline Json to_json(const ConstancyResult& r) {
  Json j;
  j["constant"] = r.constant;
  j["c"] = optional_json(r.c);
  j["max_distance"] = r.max_distance;
  j["values_agree"] = r.values_agree;
  j["max_value_deviation"] = r.max_value_deviation;
  return j;
}

}  // namespace epsdc

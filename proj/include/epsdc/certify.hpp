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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "epsdc/errors.hpp"
#include "epsdc/geometry.hpp"
#include "epsdc/max_affine.hpp"
#include "epsdc/oracle.hpp"
#include "epsdc/subdiff.hpp"
#include "epsdc/vec.hpp"

// Pointwise eps-subdifferential criteria for
//
//   (f - g)(x) <= (f - g)(y) + h(x - y)   for all x, y,
//
// with h = K ||.|| (ball moduli) or a polyhedral h with h(0) = 0:
//
//   II   d_eps f(x) is contained in d_eps g(x) + d_eps h(0)
//   IV   d_eps f(x) meets d_eps g(x) + d_eps h(0)
//   VI   dist(d_eps f(x), d_eps g(x)) <= K            (ball moduli only)
//
// The inequality implies all three at every x and every eps >= 0, so a single
// failing (x, eps) refutes it everywhere. Conversely, passing checks on a
// finite grid only certify the grid; `CertifyOptions::exact` adds a global
// comparison against the oracle's exact constant.

namespace epsdc {

// Slack for comparing a computed distance against K.
inline constexpr double kVerdictTol = 1e-8;

enum class Condition { II, IV, VI };

inline std::string_view to_string(Condition c) {
  switch (c) {
    case Condition::II: return "II";
    case Condition::IV: return "IV";
    case Condition::VI: return "VI";
  }
  return "?";
}

inline Condition parse_condition(std::string_view s) {
  if (s == "II" || s == "ii") return Condition::II;
  if (s == "IV" || s == "iv") return Condition::IV;
  if (s == "VI" || s == "vi") return Condition::VI;
  throw InputError("unknown condition '" + std::string(s) + "' (expected II, IV or VI)");
}

// The modulus h, from which the set d_eps h(0) is built for each eps.
class ModulusSpec {
 public:
  static ModulusSpec ball(double radius, Norm primal) {
    return ModulusSpec(DualBallSpec(radius, primal));
  }
  static ModulusSpec polyhedral(MaxAffine h) {
    validate_modulus(h);
    return ModulusSpec(std::move(h));
  }

  bool is_ball() const noexcept { return std::holds_alternative<DualBallSpec>(rep_); }
  const DualBallSpec& as_ball() const { return std::get<DualBallSpec>(rep_); }
  const MaxAffine& as_function() const { return std::get<MaxAffine>(rep_); }

  ModulusSet at(double eps) const {
    if (is_ball()) return ModulusSet(as_ball());
    return ModulusSet::polyhedral(as_function(), eps);
  }

 private:
  explicit ModulusSpec(DualBallSpec b) : rep_(b) {}
  explicit ModulusSpec(MaxAffine h) : rep_(std::move(h)) {}
  std::variant<DualBallSpec, MaxAffine> rep_;
};

struct CheckResult {
  Condition condition = Condition::II;
  Vec x;
  double epsilon = 0.0;
  bool verdict = false;
  // IV: the common point when true. II: a violating vertex when false.
  std::optional<Vec> witness;
  // VI: the distance.
  std::optional<double> value;
};

namespace detail {

inline void require_pair(const MaxAffine& f, const MaxAffine& g) {
  if (f.dim() != g.dim()) throw InputError("f and g have different dimensions");
}

}  // namespace detail

inline CheckResult check_condition(const MaxAffine& f, const MaxAffine& g,
                                   const ModulusSpec& modulus, const Vec& x, double eps,
                                   Condition which) {
  detail::require_pair(f, g);
  if (!(eps >= 0.0)) throw InputError("epsilon must be nonnegative");
  if (which == Condition::VI && !modulus.is_ball()) {
    throw UnsupportedConditionError("condition VI is defined for ball moduli (--K) only");
  }
  const SubdiffPolytope sf = eps_subdiff(f, x, eps);
  const SubdiffPolytope sg = eps_subdiff(g, x, eps);
  CheckResult r{which, x, eps, false, std::nullopt, std::nullopt};
  switch (which) {
    case Condition::II: {
      InclusionResult inc = included_in_sum(sf, sg, modulus.at(eps));
      r.verdict = inc.included;
      r.witness = std::move(inc.counterexample);
      break;
    }
    case Condition::IV: {
      IntersectionResult hit = intersects(sf, sg, modulus.at(eps));
      r.verdict = hit.intersects;
      r.witness = std::move(hit.witness);
      break;
    }
    case Condition::VI: {
      const double d = distance(sf, sg, modulus.as_ball().primal);
      r.value = d;
      r.verdict = d <= modulus.as_ball().radius + kVerdictTol;
      break;
    }
  }
  return r;
}

enum class Overall { Certified, Refuted, Inconclusive };

inline std::string_view to_string(Overall o) {
  switch (o) {
    case Overall::Certified: return "Certified";
    case Overall::Refuted: return "Refuted";
    case Overall::Inconclusive: return "Inconclusive";
  }
  return "?";
}

struct Refutation {
  Vec x;
  double epsilon = 0.0;
  Condition condition = Condition::VI;
  std::string detail;
};

// Global comparison of K with the exact constant of f - g.
struct ExactComparison {
  double lipschitz = 0.0;
  oracle::CellWitness witness;
  bool k_sufficient = false;
};

struct CertReport {
  ModulusSpec modulus;
  PointSet grid;
  Vec eps_grid;
  std::vector<Condition> conditions;
  std::vector<CheckResult> results;
  Overall overall = Overall::Inconclusive;
  std::optional<Refutation> refutation;
  std::optional<ExactComparison> exact;
  // True when `overall` speaks for all of R^n rather than the tested grid.
  bool global = false;
};

struct CertifyOptions {
  bool exact = false;
  // Epsilon used when probing the oracle's witness point in exact mode.
  double witness_epsilon = 1e-6;
};

namespace detail {

inline std::string refutation_detail(const CheckResult& r) {
  switch (r.condition) {
    case Condition::II:
      return "a vertex of the eps-subdifferential of f lies outside the eps-subdifferential "
             "of g plus the modulus set";
    case Condition::IV:
      return "the eps-subdifferential of f misses the eps-subdifferential of g plus the "
             "modulus set";
    case Condition::VI:
      return "distance between the eps-subdifferentials exceeds K";
  }
  return {};
}

}  // namespace detail

// Runs every (grid point, eps, condition) check. Results are ordered by grid
// index, then ascending eps, then condition; the first failing check is the
// refutation.
inline CertReport certify(const MaxAffine& f, const MaxAffine& g, const ModulusSpec& modulus,
                          const PointSet& grid, Vec eps_grid, std::vector<Condition> conditions,
                          const CertifyOptions& opts = {}) {
  detail::require_pair(f, g);
  if (grid.empty()) throw InputError("certify: grid is empty");
  if (grid.dim != f.dim()) throw InputError("certify: grid dimension differs from f");
  if (eps_grid.empty()) throw InputError("certify: eps grid is empty");
  for (double e : eps_grid) {
    if (!(e >= 0.0) || !std::isfinite(e)) throw InputError("certify: eps values must be >= 0");
  }
  if (conditions.empty()) throw InputError("certify: no conditions requested");
  if (opts.exact && !modulus.is_ball()) {
    throw InputError("certify: exact mode needs a ball modulus (--K)");
  }
  std::stable_sort(eps_grid.begin(), eps_grid.end());
  std::sort(conditions.begin(), conditions.end());
  conditions.erase(std::unique(conditions.begin(), conditions.end()), conditions.end());

  CertReport rep{modulus, grid, eps_grid, conditions, {}, Overall::Certified, {}, {}, false};
  rep.results.reserve(grid.size() * eps_grid.size() * conditions.size());
  for (const Vec& x : grid.points) {
    for (double e : eps_grid) {
      for (Condition c : conditions) {
        rep.results.push_back(check_condition(f, g, modulus, x, e, c));
        const CheckResult& r = rep.results.back();
        if (!r.verdict && !rep.refutation) {
          rep.refutation = Refutation{r.x, r.epsilon, r.condition, detail::refutation_detail(r)};
        }
      }
    }
  }
  rep.overall = rep.refutation ? Overall::Refuted : Overall::Certified;

  if (opts.exact) {
    const DualBallSpec& ball = modulus.as_ball();
    oracle::ExactLipschitz ex = oracle::lipschitz_exact(f, g, ball.primal);
    const bool enough = ball.radius + 1e-9 * std::max(1.0, ex.constant) >= ex.constant;
    rep.exact = ExactComparison{ex.constant, ex.witness, enough};
    if (rep.overall == Overall::Certified) {
      if (enough) {
        rep.global = true;
      } else {
        // The cell witness is a point where VI must fail for small eps.
        CheckResult probe = check_condition(f, g, modulus, ex.witness.interior_point,
                                            opts.witness_epsilon, Condition::VI);
        const bool refuted = !probe.verdict;
        if (refuted) {
          rep.refutation =
              Refutation{probe.x, probe.epsilon, probe.condition, detail::refutation_detail(probe)};
        }
        rep.results.push_back(std::move(probe));
        rep.overall = refuted ? Overall::Refuted : Overall::Inconclusive;
      }
    }
    if (rep.overall == Overall::Refuted) rep.global = true;
  } else if (rep.overall == Overall::Refuted) {
    rep.global = true;
  }
  return rep;
}

inline CertReport certify_lipschitz(const MaxAffine& f, const MaxAffine& g, double K,
                                    Norm primal, const PointSet& grid, Vec eps_grid,
                                    std::vector<Condition> conditions,
                                    const CertifyOptions& opts = {}) {
  return certify(f, g, ModulusSpec::ball(K, primal), grid, std::move(eps_grid),
                 std::move(conditions), opts);
}

// Largest d(d_eps f(x), d_eps g(x)) over the grid with eps = eps_floor. The
// distance is nonincreasing in eps, so eps_floor = 0 gives the least K that
// condition VI accepts at every tested point.
inline double min_lipschitz(const MaxAffine& f, const MaxAffine& g, const PointSet& grid,
                            double eps_floor, Norm primal) {
  detail::require_pair(f, g);
  if (!(eps_floor >= 0.0)) throw InputError("min_lipschitz: eps_floor must be nonnegative");
  double k = 0.0;
  for (const Vec& x : grid.points) {
    k = std::max(k, distance(eps_subdiff(f, x, eps_floor), eps_subdiff(g, x, eps_floor), primal));
  }
  return k;
}

// One interior chain point x_i with u = v + w, u in d_e f(x_i),
// v in d_e g(x_i), w in d_e h(0).
struct ChainLink {
  Vec point;
  Vec u;
  Vec v;
  Vec w;
};

struct ChainCertificate {
  Vec x;
  Vec y;
  std::size_t m = 1;
  double epsilon = 0.0;
  double gamma_m = 0.0;
  // gamma_m * epsilon / m, the slack used at interior chain points.
  double link_epsilon = 0.0;
  // x_i = x + (i/m)(y - x), i = 0..m.
  std::vector<Vec> chain_points;
  Vec u_star;
  Vec v_star;
  // Links for i = 1..m-1 (links[i-1]); shorter when a link fails.
  std::vector<ChainLink> links;
  std::optional<double> bound_value;
  double actual_value = 0.0;
  bool feasible = false;
  std::optional<std::size_t> failure_index;
};

// Discretizes the segment [x, y] into m steps and, at each interior point,
// selects u_i = v_i + w_i from the eps-subdifferentials with slack
// gamma_m * eps / m, gamma_m = 1 / (2m). Adding the eps-subgradient
// inequalities along the chain gives
//
//   f(y) - f(x) + g(x) - g(y) >= (1/m) <y - x, u* - v*>
//                                + (1/m) sum_i <y - x, w_i>
//                                - 2 (m - 1) gamma_m eps / m - 2 eps,
//
// where u* in d f(x) and v* in d g(y) are the lowest-index active gradients.
// Each w_i maximizes <y - x, w> over the feasible links, which gives the
// sharpest bound of this form.
// An empty intersection at some x_i refutes the modulus inequality.
inline ChainCertificate chain_certificate(const MaxAffine& f, const MaxAffine& g,
                                          const ModulusSpec& modulus, const Vec& x,
                                          const Vec& y, std::size_t m, double eps) {
  detail::require_pair(f, g);
  require_dim(f, x);
  require_dim(f, y);
  if (m < 1) throw InputError("chain_certificate: m must be at least 1");
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw InputError("chain_certificate: epsilon must be positive");
  }
  const double md = static_cast<double>(m);
  ChainCertificate c;
  c.x = x;
  c.y = y;
  c.m = m;
  c.epsilon = eps;
  c.gamma_m = 1.0 / (2.0 * md);
  c.link_epsilon = c.gamma_m * eps / md;
  for (std::size_t i = 0; i <= m; ++i) {
    c.chain_points.push_back(i == m ? y : lerp(x, y, static_cast<double>(i) / md));
  }
  c.u_star = f.piece(active_set(f, x).front()).a;
  c.v_star = g.piece(active_set(g, y).front()).a;
  c.actual_value = eval(f, y) - eval(f, x) + eval(g, x) - eval(g, y);

  const Vec dir = subtract(y, x);
  double w_sum = 0.0;
  const ModulusSet link_modulus = modulus.at(c.link_epsilon);
  for (std::size_t i = 1; i < m; ++i) {
    const Vec& xi = c.chain_points[i];
    IntersectionResult hit = intersects(eps_subdiff(f, xi, c.link_epsilon),
                                        eps_subdiff(g, xi, c.link_epsilon), link_modulus,
                                        std::span<const double>(dir));
    if (!hit.intersects) {
      c.failure_index = i;
      return c;
    }
    w_sum += dot(dir, *hit.modulus_point);
    c.links.push_back({xi, std::move(*hit.witness), std::move(*hit.b_point),
                       std::move(*hit.modulus_point)});
  }
  c.feasible = true;
  c.bound_value = dot(dir, subtract(c.u_star, c.v_star)) / md + w_sum / md -
                  2.0 * (md - 1.0) / md * c.gamma_m * eps - 2.0 * eps;
  return c;
}

struct ConstancyResult {
  // Every tested distance d(d_eps f(x), d_eps g(x)) is within tol of zero.
  bool constant = false;
  // (f - g) at the first grid point, when constant.
  std::optional<double> c;
  double max_distance = 0.0;
  // Direct check that |(f - g)(x) - c| <= tol on the whole grid.
  bool values_agree = false;
  double max_value_deviation = 0.0;
};

inline ConstancyResult check_constancy(const MaxAffine& f, const MaxAffine& g,
                                       const PointSet& grid, const Vec& eps_grid, double tol,
                                       Norm primal = Norm::Linf) {
  detail::require_pair(f, g);
  if (!(tol >= 0.0)) throw InputError("check_constancy: tol must be nonnegative");
  if (grid.empty()) throw InputError("check_constancy: grid is empty");
  if (eps_grid.empty()) throw InputError("check_constancy: eps grid is empty");
  ConstancyResult r;
  for (const Vec& x : grid.points) {
    for (double e : eps_grid) {
      r.max_distance =
          std::max(r.max_distance, distance(eps_subdiff(f, x, e), eps_subdiff(g, x, e), primal));
    }
  }
  r.constant = r.max_distance <= tol;
  const double c0 = eval_difference(f, g, grid.points.front());
  for (const Vec& x : grid.points) {
    r.max_value_deviation = std::max(r.max_value_deviation, std::fabs(eval_difference(f, g, x) - c0));
  }
  r.values_agree = r.max_value_deviation <= tol;
  if (r.constant) r.c = c0;
  return r;
}

struct ExactSubdiffFacts {
  bool inclusion = false;     // d f(x) in d g(x)
  bool intersection = false;  // d f(x) meets d g(x)
  bool equality = false;      // d f(x) = d g(x)
};

// Per-point comparison of Fenchel subdifferentials. The three predicates are
// equivalent as statements about every x in R^n, not pointwise.
inline std::vector<ExactSubdiffFacts> check_exact_subdiff(const MaxAffine& f,
                                                          const MaxAffine& g,
                                                          const PointSet& grid) {
  detail::require_pair(f, g);
  const ModulusSet zero = ModulusSet::ball(0.0, Norm::Linf);
  std::vector<ExactSubdiffFacts> out;
  out.reserve(grid.size());
  for (const Vec& x : grid.points) {
    const SubdiffPolytope sf = exact_subdiff(f, x);
    const SubdiffPolytope sg = exact_subdiff(g, x);
    ExactSubdiffFacts facts;
    facts.inclusion = included_in_sum(sf, sg, zero).included;
    facts.intersection = intersects(sf, sg, zero).intersects;
    facts.equality = facts.inclusion && included_in_sum(sg, sf, zero).included;
    out.push_back(facts);
  }
  return out;
}

// d_eps f(x) in d_eps g(x) for every eps in the grid. Holding for all eps > 0
// is equivalent to x being a global minimizer of g - f.
inline bool check_global_min(const MaxAffine& f, const MaxAffine& g, const Vec& x,
                             const Vec& eps_grid) {
  detail::require_pair(f, g);
  if (eps_grid.empty()) throw InputError("check_global_min: eps grid is empty");
  const ModulusSet zero = ModulusSet::ball(0.0, Norm::Linf);
  for (double e : eps_grid) {
    if (!included_in_sum(eps_subdiff(f, x, e), eps_subdiff(g, x, e), zero).included) {
      return false;
    }
  }
  return true;
}

}  // namespace epsdc

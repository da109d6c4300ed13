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
#include <charconv>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <CLI11.hpp>

#include "epsdc/certify.hpp"
#include "epsdc/errors.hpp"
#include "epsdc/json_io.hpp"
#include "epsdc/oracle.hpp"
#include "epsdc/report.hpp"
#include "epsdc/subdiff.hpp"

// Command-line front end. Every command prints one JSON document on one line.
//
// Exit codes: 0 certified / true, 1 refuted / false (witness in the JSON),
// 2 usage or input error, 3 numerical or capacity error.

namespace epsdc::cli {

enum ExitCode : int { kOk = 0, kNegative = 1, kUsage = 2, kNumerical = 3 };

namespace detail {

inline double parse_double(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw InputError("not a number: '" + std::string(s) + "'");
  }
  return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline Vec parse_list(std::string_view s) {
  Vec v;
  for (std::string_view part : split(s, ',')) v.push_back(parse_double(part));
  return v;
}

inline std::vector<Condition> parse_conditions(std::string_view s) {
  std::vector<Condition> out;
  for (std::string_view part : split(s, ',')) out.push_back(parse_condition(part));
  return out;
}

inline std::pair<double, double> parse_box(std::string_view s) {
  const Vec v = parse_list(s);
  if (v.size() != 2 || !(v[0] < v[1])) throw InputError("--box expects 'lo,hi' with lo < hi");
  return {v[0], v[1]};
}

inline Vec parse_point(const std::string& s, std::size_t dim, const char* flag) {
  Vec v = parse_vector(s);
  if (v.size() != dim) {
    throw InputError(std::string(flag) + ": expected " + std::to_string(dim) +
                     " coordinates, got " + std::to_string(v.size()));
  }
  return v;
}

// Options shared by commands that take f, g and a modulus.
struct PairArgs {
  std::string f, g, h;
  std::optional<double> K;
  std::string norm = "linf";

  void add_pair(CLI::App* app) {
    app->add_option("--f", f, "function f (JSON)")->required()->check(CLI::ExistingFile);
    app->add_option("--g", g, "function g (JSON)")->required()->check(CLI::ExistingFile);
    app->add_option("--norm", norm, "primal norm: l1 or linf")
        ->check(CLI::IsMember({"l1", "linf"}));
  }

  void add_modulus(CLI::App* app) {
    auto* k = app->add_option("--K", K, "Lipschitz constant (dual-ball modulus)");
    auto* hh = app->add_option("--h", h, "polyhedral modulus h with h(0) = 0 (JSON)")
                   ->check(CLI::ExistingFile);
    k->excludes(hh);
  }

  ModulusSpec modulus(std::size_t dim) const {
    if (K) return ModulusSpec::ball(*K, parse_norm(norm));
    if (h.empty()) throw InputError("one of --K or --h is required");
    MaxAffine hf = load_max_affine(h);
    if (hf.dim() != dim) throw InputError("--h: dimension differs from f");
    return ModulusSpec::polyhedral(std::move(hf));
  }

  std::pair<MaxAffine, MaxAffine> load() const {
    MaxAffine ff = load_max_affine(f);
    MaxAffine gg = load_max_affine(g);
    if (ff.dim() != gg.dim()) throw InputError("f and g have different dimensions");
    return {std::move(ff), std::move(gg)};
  }
};

inline void emit(std::ostream& out, const Json& j) { out << j.dump() << '\n'; }

}  // namespace detail

// Runs one invocation; `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Epsilon-subdifferential certification of Lipschitz DC functions", "epsdc"};
  // -h would collide with the modulus option --h.
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);

  // subdiff
  auto* sub = app.add_subcommand("subdiff", "vertices of the eps-subdifferential of f at x");
  std::string sub_f, sub_x;
  double sub_eps = 0.0;
  bool sub_vertices = false;
  sub->add_option("--f", sub_f, "function f (JSON)")->required()->check(CLI::ExistingFile);
  sub->add_option("--x", sub_x, "point, e.g. \"[1, 0]\"")->required();
  sub->add_option("--eps", sub_eps, "epsilon >= 0")->required();
  sub->add_flag("--vertices", sub_vertices, "list vertices (always on)");

  // check
  auto* chk = app.add_subcommand("check", "one condition at one (x, eps)");
  detail::PairArgs chk_pair;
  std::string chk_x, chk_cond;
  double chk_eps = 0.0;
  chk_pair.add_pair(chk);
  chk_pair.add_modulus(chk);
  chk->add_option("--x", chk_x, "point")->required();
  chk->add_option("--eps", chk_eps, "epsilon >= 0")->required();
  chk->add_option("--cond", chk_cond, "II, IV or VI")->required();

  // certify
  auto* cert = app.add_subcommand("certify", "all conditions over a point grid");
  detail::PairArgs cert_pair;
  std::string cert_grid, cert_box, cert_eps, cert_cond = "II,IV,VI";
  std::size_t cert_per_dim = 0;
  bool cert_exact = false;
  cert_pair.add_pair(cert);
  cert_pair.add_modulus(cert);
  auto* grid_opt =
      cert->add_option("--grid", cert_grid, "point set (JSON)")->check(CLI::ExistingFile);
  auto* box_opt = cert->add_option("--box", cert_box, "lattice bounds lo,hi");
  auto* per_dim_opt = cert->add_option("--per-dim", cert_per_dim, "lattice points per axis");
  grid_opt->excludes(box_opt);
  box_opt->needs(per_dim_opt);
  per_dim_opt->needs(box_opt);
  cert->add_option("--eps", cert_eps, "comma-separated eps values")->required();
  cert->add_option("--cond", cert_cond, "comma-separated conditions");
  cert->add_flag("--exact", cert_exact, "compare K with the exact Lipschitz constant");

  // chain
  auto* chn = app.add_subcommand("chain", "segment-chain lower-bound certificate");
  detail::PairArgs chn_pair;
  std::string chn_x, chn_y;
  std::size_t chn_m = 1;
  double chn_eps = 0.0;
  chn_pair.add_pair(chn);
  chn_pair.add_modulus(chn);
  chn->add_option("--x", chn_x, "segment start")->required();
  chn->add_option("--y", chn_y, "segment end")->required();
  chn->add_option("--m", chn_m, "number of steps")->required();
  chn->add_option("--eps", chn_eps, "epsilon > 0")->required();

  // estimate
  auto* est = app.add_subcommand("estimate", "Lipschitz constant of f - g");
  detail::PairArgs est_pair;
  bool est_exact = false;
  std::size_t est_samples = 0;
  std::uint64_t est_seed = 0;
  std::string est_box;
  est_pair.add_pair(est);
  auto* est_exact_opt = est->add_flag("--exact", est_exact, "exact cell enumeration");
  auto* est_samples_opt = est->add_option("--samples", est_samples, "number of random pairs");
  est->add_option("--seed", est_seed, "RNG seed");
  auto* est_box_opt = est->add_option("--box", est_box, "sampling box lo,hi");
  est_exact_opt->excludes(est_samples_opt);
  est_samples_opt->needs(est_box_opt);

  // constancy
  auto* cst = app.add_subcommand("constancy", "is f - g constant");
  detail::PairArgs cst_pair;
  std::string cst_grid, cst_eps;
  double cst_tol = 1e-9;
  cst_pair.add_pair(cst);
  cst->add_option("--grid", cst_grid, "point set (JSON)")->required()->check(CLI::ExistingFile);
  cst->add_option("--eps", cst_eps, "comma-separated eps values")->required();
  cst->add_option("--tol", cst_tol, "tolerance");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(std::move(rev));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "epsdc: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (sub->parsed()) {
      const MaxAffine f = load_max_affine(sub_f);
      const Vec x = detail::parse_point(sub_x, f.dim(), "--x");
      const SubdiffPolytope S = eps_subdiff(f, x, sub_eps);
      Json j;
      Json verts = Json::array();
      for (const Vec& v : vertices(S)) verts.push_back(to_json(v));
      j["vertices"] = std::move(verts);
      j["epsilon"] = sub_eps;
      j["point"] = to_json(x);
      detail::emit(out, j);
      return kOk;
    }
    if (chk->parsed()) {
      const auto [f, g] = chk_pair.load();
      const ModulusSpec mod = chk_pair.modulus(f.dim());
      const Vec x = detail::parse_point(chk_x, f.dim(), "--x");
      const CheckResult r = check_condition(f, g, mod, x, chk_eps, parse_condition(chk_cond));
      detail::emit(out, to_json(r));
      return r.verdict ? kOk : kNegative;
    }
    if (cert->parsed()) {
      const auto [f, g] = cert_pair.load();
      const ModulusSpec mod = cert_pair.modulus(f.dim());
      PointSet grid;
      if (!cert_grid.empty()) {
        grid = load_point_set(cert_grid);
      } else if (!cert_box.empty()) {
        const auto [lo, hi] = detail::parse_box(cert_box);
        grid = PointSet::lattice(f.dim(), lo, hi, cert_per_dim);
      } else {
        throw InputError("one of --grid or --box/--per-dim is required");
      }
      CertifyOptions opts;
      opts.exact = cert_exact;
      const CertReport rep = certify(f, g, mod, grid, detail::parse_list(cert_eps),
                                     detail::parse_conditions(cert_cond), opts);
      detail::emit(out, to_json(rep));
      switch (rep.overall) {
        case Overall::Certified: return kOk;
        case Overall::Refuted: return kNegative;
        case Overall::Inconclusive: return kNumerical;
      }
    }
    if (chn->parsed()) {
      const auto [f, g] = chn_pair.load();
      const ModulusSpec mod = chn_pair.modulus(f.dim());
      const Vec x = detail::parse_point(chn_x, f.dim(), "--x");
      const Vec y = detail::parse_point(chn_y, f.dim(), "--y");
      const ChainCertificate c = chain_certificate(f, g, mod, x, y, chn_m, chn_eps);
      detail::emit(out, to_json(c));
      if (c.feasible && c.actual_value < *c.bound_value - 1e-7) {
        err << "epsdc: chain bound exceeds the actual value\n";
        return kNumerical;
      }
      return c.feasible ? kOk : kNegative;
    }
    if (est->parsed()) {
      const auto [f, g] = est_pair.load();
      const Norm norm = parse_norm(est_pair.norm);
      Json j;
      if (est_exact) {
        const oracle::ExactLipschitz ex = oracle::lipschitz_exact(f, g, norm);
        j["lipschitz"] = ex.constant;
        j["method"] = "exact";
        j["witness"] = to_json(ex.witness);
      } else {
        if (est_samples == 0) throw InputError("estimate needs --exact or --samples N --box lo,hi");
        const auto [lo, hi] = detail::parse_box(est_box);
        const double k = oracle::lipschitz_sampled(f, g, Vec(f.dim(), lo), Vec(f.dim(), hi),
                                                   est_samples, est_seed, norm);
        j["lipschitz"] = k;
        j["method"] = "sampled";
        j["samples"] = est_samples;
        j["seed"] = est_seed;
      }
      detail::emit(out, j);
      return kOk;
    }
    if (cst->parsed()) {
      const auto [f, g] = cst_pair.load();
      const PointSet grid = load_point_set(cst_grid);
      if (grid.dim != f.dim()) throw InputError("--grid: dimension differs from f");
      const ConstancyResult r = check_constancy(f, g, grid, detail::parse_list(cst_eps), cst_tol,
                                                parse_norm(cst_pair.norm));
      detail::emit(out, to_json(r));
      return r.constant ? kOk : kNegative;
    }
  } catch (const InputError& e) {
    err << "epsdc: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "epsdc: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}

}  // namespace epsdc::cli

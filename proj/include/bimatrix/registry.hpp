#pragma once

// Uniform entry point for every solver, keyed by the identifiers used on the
// command line and in benchmark configs.
//
//   pure dmp bbm1 bbm2 ts ts2 ts001 ks ksplus lh se
//
// Flags are "key=value" pairs joined by ';' (dmp: row, 1-based or
// random:<seed>; ts: delta, init; ts2/ts001: init; lh: label, 1-based).

#include "bimatrix/approx.hpp"
#include "bimatrix/deadline.hpp"
#include "bimatrix/exact.hpp"
#include "bimatrix/game.hpp"
#include "bimatrix/random.hpp"
#include "bimatrix/rational.hpp"
#include "bimatrix/ts.hpp"

#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bimatrix {

using Flags = std::map<std::string, std::string>;

inline Flags parse_flags(const std::string& text) {
  Flags out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw std::invalid_argument("bad flag '" + item + "', expected key=value");
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

// Canonical form: keys sorted, joined by ';'.
inline std::string format_flags(const Flags& flags) {
  std::string out;
  for (const auto& [k, v] : flags) out += (out.empty() ? "" : ";") + k + "=" + v;
  return out;
}

inline const std::vector<std::string>& algorithm_ids() {
  static const std::vector<std::string> ids{"pure", "dmp", "bbm1", "bbm2", "ts", "ts2",
                                            "ts001", "ks", "ksplus", "lh", "se"};
  return ids;
}

struct AlgorithmOutput {
  MixedProfile profile;
  std::optional<RationalProfile> exact;  // exact solvers: the certified profile
  EpsKind kind = EpsKind::ApproxNE;
  std::optional<long> iterations;         // TS iterations, LH pivots, SE support pairs
  std::vector<int> lp_rows;
  std::vector<double> objective_trace;
  std::string detail;                     // human-readable extras (supports, ...)
};

namespace detail {

inline void check_known(const Flags& flags, std::initializer_list<const char*> allowed,
                        const std::string& id) {
  for (const auto& [k, v] : flags) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw std::invalid_argument("algorithm " + id + " does not take flag '" + k + "'");
  }
}

inline std::string support_text(const verify::SupportPair& sp) {
  std::string s = "rows {";
  for (std::size_t k = 0; k < sp.rows.size(); ++k) s += (k ? "," : "") + std::to_string(sp.rows[k] + 1);
  s += "} cols {";
  for (std::size_t k = 0; k < sp.cols.size(); ++k) s += (k ? "," : "") + std::to_string(sp.cols[k] + 1);
  return s + "}";
}

inline AlgorithmOutput from_approx(ApproxResult r) {
  AlgorithmOutput out;
  out.profile = std::move(r.profile);
  out.kind = r.kind;
  out.iterations = r.iterations;
  out.lp_rows = std::move(r.lp_rows);
  out.objective_trace = std::move(r.objective_trace);
  return out;
}

}  // namespace detail

// Runs one solver. Throws TimeoutError when the deadline passes.
inline AlgorithmOutput run_algorithm(const std::string& id, const Flags& flags, const Game& g,
                                     const RationalGame& exact_game, const Deadline& deadline) {
  if (id == "pure") {
    detail::check_known(flags, {}, id);
    return detail::from_approx(approx::best_pure(g, deadline));
  }
  if (id == "dmp") {
    detail::check_known(flags, {"row"}, id);
    Index row = 0;
    if (flags.count("row")) {
      const std::string& v = flags.at("row");
      if (v.rfind("random:", 0) == 0) {
        Rng rng(std::stoull(v.substr(7)));
        row = static_cast<Index>(rng.below(static_cast<std::uint64_t>(g.rows())));
      } else {
        row = std::stol(v) - 1;
      }
    }
    return detail::from_approx(approx::dmp(g, row));
  }
  if (id == "bbm1") {
    detail::check_known(flags, {}, id);
    return detail::from_approx(approx::bbm1(g, deadline));
  }
  if (id == "bbm2") {
    detail::check_known(flags, {}, id);
    return detail::from_approx(approx::bbm2(g, deadline));
  }
  if (id == "ts" || id == "ts2" || id == "ts001") {
    approx::TsOptions opt;
    if (id == "ts") {
      detail::check_known(flags, {"delta", "init"}, id);
      if (flags.count("delta")) opt.delta = std::stod(flags.at("delta"));
    } else {
      detail::check_known(flags, {"init"}, id);
      opt.delta = id == "ts2" ? 0.2 : 0.001;
    }
    if (flags.count("init")) approx::parse_ts_init(flags.at("init"), opt);
    opt.deadline = deadline;
    approx::TsTrace trace;
    auto out = detail::from_approx(approx::ts(g, opt, &trace));
    out.detail = "stationary value " + std::to_string(trace.stationary_value) +
                 (trace.second_point_used ? ", second point used" : "");
    return out;
  }
  if (id == "ks") {
    detail::check_known(flags, {}, id);
    return detail::from_approx(approx::ks(g, deadline));
  }
  if (id == "ksplus") {
    detail::check_known(flags, {}, id);
    return detail::from_approx(approx::ks_plus(g, deadline));
  }
  if (id == "lh") {
    detail::check_known(flags, {"label"}, id);
    const int label = flags.count("label") ? std::stoi(flags.at("label")) : 1;
    const int total = static_cast<int>(g.rows() + g.cols());
    if (label < 1 || label > total)
      throw std::invalid_argument("lh: label must lie in 1.." + std::to_string(total));
    exact::LhOptions opt;
    opt.deadline = deadline;
    auto r = exact::lemke_howson(g, exact_game, label - 1, opt);
    AlgorithmOutput out;
    out.profile = r.profile;
    out.exact = std::move(r.exact);
    out.iterations = r.pivots;
    out.detail = detail::support_text(r.support) + (out.exact ? "" : " (exact refit failed)");
    return out;
  }
  if (id == "se") {
    detail::check_known(flags, {}, id);
    exact::SeOptions opt;
    opt.deadline = deadline;
    auto r = exact::support_enumeration(g, exact_game, opt);
    if (r.status == exact::SearchStatus::TimedOut) throw TimeoutError();
    if (r.status != exact::SearchStatus::Found)
      throw std::runtime_error("se: no equilibrium found (exhausted)");
    AlgorithmOutput out;
    out.profile = to_double(*r.profile);
    out.exact = std::move(r.profile);
    out.iterations = r.pairs_visited;
    out.detail = detail::support_text(r.support);
    return out;
  }
  throw std::invalid_argument("unknown algorithm: " + id);
}

inline AlgorithmOutput run_algorithm(const std::string& id, const Flags& flags, const Game& g,
                                     const Deadline& deadline = Deadline::never()) {
  return run_algorithm(id, flags, g, RationalGame::from(g), deadline);
}

// Exact epsilon of a solver's output: the certified profile when there is
// one, otherwise the float profile made exactly stochastic.
inline Rational verified_epsilon(const RationalGame& exact_game, const AlgorithmOutput& out) {
  if (out.exact) return verify::exact_epsilon(exact_game, *out.exact, out.kind);
  return verify::exact_epsilon(exact_game, to_rational_profile(out.profile), out.kind);
}

}  // namespace bimatrix

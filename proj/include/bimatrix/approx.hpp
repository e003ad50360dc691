#pragma once

// Polynomial-time approximation algorithms: Pure, DMP, BBM1, BBM2, KS, KS+.
// The descent method lives in ts.hpp.

#include "bimatrix/deadline.hpp"
#include "bimatrix/game.hpp"
#include "bimatrix/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace bimatrix::approx {

// Guarantee ceilings of each method.
inline constexpr double kDmpBound = 0.5;
inline const double kBbm1Bound = (3.0 - std::sqrt(5.0)) / 2.0;
inline constexpr double kBbm2Bound = 0.3640;
inline constexpr double kKsBound = 2.0 / 3.0;
inline constexpr double kKsPlusBound = 2.0 / 3.0 - 0.00591;

namespace detail {

inline ApproxResult finish(const Game& g, MixedProfile p, EpsKind kind, std::string name,
                           const Stopwatch& sw) {
  ApproxResult r;
  r.eps = epsilon(g, p, kind);
  r.profile = std::move(p);
  r.kind = kind;
  r.algorithm = std::move(name);
  r.solve_time = sw.seconds();
  return r;
}

inline Vector unit(Index size, Index k) {
  Vector v = Vector::Zero(size);
  v(k) = 1.0;
  return v;
}

}  // namespace detail

struct PureCell {
  Index row = 0;
  Index col = 0;
  double eps = 1.0;
};

// Best pure profile. For a pure profile the NE and WSNE values coincide.
inline PureCell best_pure_cell(const Game& g, const Deadline& deadline = Deadline::never()) {
  const Matrix& r = g.row_payoffs();
  const Matrix& c = g.col_payoffs();
  const Vector col_max = r.colwise().maxCoeff().transpose();
  const Vector row_max = c.rowwise().maxCoeff();
  PureCell best{0, 0, std::numeric_limits<double>::infinity()};
  for (Index i = 0; i < g.rows(); ++i) {
    if ((i & 63) == 0) deadline.check();
    for (Index j = 0; j < g.cols(); ++j) {
      const double e = std::max(col_max(j) - r(i, j), row_max(i) - c(i, j));
      if (e < best.eps) {
        best = {i, j, e};
        if (e <= 0.0) return best;
      }
    }
  }
  return best;
}

inline ApproxResult best_pure(const Game& g, const Deadline& deadline = Deadline::never()) {
  Stopwatch sw;
  const PureCell cell = best_pure_cell(g, deadline);
  return detail::finish(g, MixedProfile::pure(g.rows(), g.cols(), cell.row, cell.col),
                        EpsKind::ApproxNE, "pure", sw);
}

inline ApproxResult dmp(const Game& g, Index initial_row = 0) {
  Stopwatch sw;
  if (initial_row < 0 || initial_row >= g.rows()) throw std::out_of_range("dmp: initial row out of range");
  const Index j = pure_best_response(g, initial_row, Side::Column);
  const Index k = pure_best_response(g, j, Side::Row);
  Vector x = Vector::Zero(g.rows());
  x(initial_row) += 0.5;
  x(k) += 0.5;
  return detail::finish(g, {x, detail::unit(g.cols(), j)}, EpsKind::ApproxNE, "dmp", sw);
}

// Equilibrium of the zero-sum game (R - C, C - R).
inline MixedProfile zero_sum_profile(const Game& g, const Deadline& deadline = Deadline::never()) {
  const Matrix diff = g.row_payoffs() - g.col_payoffs();
  const auto zs = lp::solve_zero_sum(diff, deadline);
  return {zs.x, zs.y};
}

namespace detail {

// Shared first stage of BBM1/BBM2. The player with the larger regret at the
// zero-sum equilibrium (row on ties) is called the deviator.
struct BbmStage {
  MixedProfile start;
  Regrets reg;
  bool row_deviates = true;
  double g1 = 0.0;
  Index deviation = 0;  // deviator's pure best response to the opponent
  Index reply = 0;      // opponent's pure best response to `deviation`
};

inline BbmStage bbm_stage(const Game& g, const Deadline& deadline) {
  BbmStage s;
  s.start = zero_sum_profile(g, deadline);
  s.reg = regrets(g, s.start);
  s.row_deviates = s.reg.row >= s.reg.col;
  s.g1 = std::max(s.reg.row, s.reg.col);
  if (s.row_deviates) {
    s.deviation = argmax_first(g.row_payoffs() * s.start.y);
    s.reply = pure_best_response(g, s.deviation, Side::Column);
  } else {
    s.deviation = argmax_first(g.col_payoffs().transpose() * s.start.x);
    s.reply = pure_best_response(g, s.deviation, Side::Row);
  }
  return s;
}

// Deviator plays (1-p) own LP strategy + p deviation; opponent plays
// (1-q) own LP strategy + q reply.
inline MixedProfile bbm_mix(const Game& g, const BbmStage& s, double p, double q) {
  if (s.row_deviates) {
    return {(1.0 - p) * s.start.x + p * unit(g.rows(), s.deviation),
            (1.0 - q) * s.start.y + q * unit(g.cols(), s.reply)};
  }
  return {(1.0 - q) * s.start.x + q * unit(g.rows(), s.reply),
          (1.0 - p) * s.start.y + p * unit(g.cols(), s.deviation)};
}

}  // namespace detail

inline ApproxResult bbm1(const Game& g, const Deadline& deadline = Deadline::never()) {
  Stopwatch sw;
  const auto s = detail::bbm_stage(g, deadline);
  if (s.g1 <= kBbm1Bound) return detail::finish(g, s.start, EpsKind::ApproxNE, "bbm1", sw);
  const double d2 = (1.0 - s.g1) / (2.0 - s.g1);
  return detail::finish(g, detail::bbm_mix(g, s, 1.0, d2), EpsKind::ApproxNE, "bbm1", sw);
}

// Above a regret of 1/3 the mixing weights of both players are tuned: the
// BBM1 point, the weight from the opponent's own gain, and a grid over the
// two-parameter family, refined around the best grid point. The LP point
// itself is part of the family, so the result is never worse than BBM1.
inline ApproxResult bbm2(const Game& g, const Deadline& deadline = Deadline::never()) {
  Stopwatch sw;
  const auto s = detail::bbm_stage(g, deadline);
  if (s.g1 <= 1.0 / 3.0) return detail::finish(g, s.start, EpsKind::ApproxNE, "bbm2", sw);

  // Opponent's gain from switching to `reply` while the deviator stays put.
  double h2 = 0.0;
  if (s.row_deviates)
    h2 = (s.start.x.transpose() * g.col_payoffs()).eval()(s.reply) - s.start.x.dot(g.col_payoffs() * s.start.y);
  else
    h2 = (g.row_payoffs() * s.start.y)(s.reply) - s.start.x.dot(g.row_payoffs() * s.start.y);
  h2 = std::max(0.0, h2);

  MixedProfile best_p = s.start;
  double best = epsilon(g, s.start, EpsKind::ApproxNE);
  auto consider = [&](double p, double q) {
    p = std::clamp(p, 0.0, 1.0);
    q = std::clamp(q, 0.0, 1.0);
    MixedProfile cand = detail::bbm_mix(g, s, p, q);
    const double e = epsilon(g, cand, EpsKind::ApproxNE);
    if (e < best) {
      best = e;
      best_p = std::move(cand);
      return true;
    }
    return false;
  };
  consider(1.0, (1.0 - s.g1) / (2.0 - s.g1));
  consider(1.0, (1.0 - s.g1 + h2) / (2.0 - s.g1));
  constexpr int grid = 20;
  double bp = 0.0, bq = 0.0;
  for (int a = 0; a <= grid; ++a)
    for (int b = 0; b <= grid; ++b)
      if (consider(static_cast<double>(a) / grid, static_cast<double>(b) / grid)) {
        bp = static_cast<double>(a) / grid;
        bq = static_cast<double>(b) / grid;
      }
  for (double step = 0.5 / grid; step > 1e-4; step *= 0.5) {
    bool moved = true;
    while (moved) {
      moved = false;
      for (int da = -1; da <= 1; ++da)
        for (int db = -1; db <= 1; ++db) {
          if (!da && !db) continue;
          const double p = std::clamp(bp + da * step, 0.0, 1.0);
          const double q = std::clamp(bq + db * step, 0.0, 1.0);
          if (consider(p, q)) {
            bp = p;
            bq = q;
            moved = true;
          }
        }
    }
  }
  return detail::finish(g, best_p, EpsKind::ApproxNE, "bbm2", sw);
}

inline ApproxResult ks(const Game& g, const Deadline& deadline = Deadline::never()) {
  Stopwatch sw;
  const PureCell cell = best_pure_cell(g, deadline);
  MixedProfile pure = MixedProfile::pure(g.rows(), g.cols(), cell.row, cell.col);
  if (cell.eps <= kKsBound) return detail::finish(g, std::move(pure), EpsKind::WellSupported, "ks", sw);
  MixedProfile zs = zero_sum_profile(g, deadline);
  const bool use_zs = epsilon(g, zs, EpsKind::WellSupported) < epsilon(g, pure, EpsKind::WellSupported);
  return detail::finish(g, use_zs ? std::move(zs) : std::move(pure), EpsKind::WellSupported, "ks", sw);
}

namespace detail {

// Upper envelope of lines a_k + b_k t on [0,1], as its breakpoints (t, value)
// including both endpoints.
struct Envelope {
  std::vector<double> t;
  std::vector<double> v;

  double at(double s) const {
    const auto it = std::upper_bound(t.begin(), t.end(), s);
    if (it == t.begin()) return v.front();
    if (it == t.end()) return v.back();
    const auto k = static_cast<std::size_t>(it - t.begin());
    const double w = (s - t[k - 1]) / (t[k] - t[k - 1]);
    return v[k - 1] + w * (v[k] - v[k - 1]);
  }
};

inline Envelope upper_envelope(std::vector<std::pair<double, double>> lines) {
  // Sort by slope, then intercept; keep the hull.
  std::sort(lines.begin(), lines.end(), [](const auto& l, const auto& r) {
    return l.second < r.second || (l.second == r.second && l.first < r.first);
  });
  std::vector<std::pair<double, double>> hull;
  auto bad = [](const auto& l1, const auto& l2, const auto& l3) {
    // l2 is useless if l1 and l3 meet no later than l1 and l2.
    return (l3.first - l1.first) * (l2.second - l1.second) >=
           (l2.first - l1.first) * (l3.second - l1.second);
  };
  for (const auto& l : lines) {
    if (!hull.empty() && hull.back().second == l.second) hull.pop_back();
    while (hull.size() >= 2 && bad(hull[hull.size() - 2], hull.back(), l)) hull.pop_back();
    hull.push_back(l);
  }
  Envelope env;
  auto value = [&](double s) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& l : hull) best = std::max(best, l.first + l.second * s);
    return best;
  };
  env.t.push_back(0.0);
  for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
    const double s = (hull[k].first - hull[k + 1].first) / (hull[k + 1].second - hull[k].second);
    if (s > env.t.back() && s < 1.0) env.t.push_back(s);
  }
  env.t.push_back(1.0);
  for (double s : env.t) env.v.push_back(value(s));
  return env;
}

// min over t in [0,1] of env(t) - min(l1(t), l2(t)); convex piecewise linear,
// so a breakpoint or the crossing of l1 and l2 attains it.
inline std::pair<double, double> min_gap(const Envelope& env, double a1, double b1, double a2,
                                         double b2) {
  auto f = [&](double s, double e) { return e - std::min(a1 + b1 * s, a2 + b2 * s); };
  double best = std::numeric_limits<double>::infinity(), arg = 0.0;
  for (std::size_t k = 0; k < env.t.size(); ++k) {
    const double val = f(env.t[k], env.v[k]);
    if (val < best) {
      best = val;
      arg = env.t[k];
    }
  }
  if (b1 != b2) {
    const double s = (a2 - a1) / (b1 - b2);
    if (s > 0.0 && s < 1.0) {
      const double val = f(s, env.at(s));
      if (val < best) {
        best = val;
        arg = s;
      }
    }
  }
  return {std::max(0.0, best), arg};
}

// Best WSNE whose row strategy lives on `rows` and column strategy on `cols`:
// each side is a small LP minimizing the spread between the best payoff and
// the worst supported payoff.
inline Vector min_spread_strategy(const Matrix& pay, const std::vector<Index>& indiff,
                                  const std::vector<Index>& support, const Deadline& deadline) {
  // Variables: strategy weights on `support`, then u (best), l (worst).
  lp::LinearProgram<double> prog;
  prog.sense = lp::Sense::Minimize;
  const auto t = support.size();
  for (std::size_t c = 0; c < t; ++c) prog.add_variable(0.0);
  prog.add_variable(1.0, std::nullopt, std::nullopt);
  prog.add_variable(-1.0, std::nullopt, std::nullopt);
  for (Index k = 0; k < pay.rows(); ++k) {
    std::vector<double> row(t + 2, 0.0);
    for (std::size_t c = 0; c < t; ++c) row[c] = pay(k, support[c]);
    row[t] = -1.0;
    prog.add_constraint(std::move(row), lp::Relation::LessEqual, 0.0);
  }
  for (Index i : indiff) {
    std::vector<double> row(t + 2, 0.0);
    for (std::size_t c = 0; c < t; ++c) row[c] = -pay(i, support[c]);
    row[t + 1] = 1.0;
    prog.add_constraint(std::move(row), lp::Relation::LessEqual, 0.0);
  }
  std::vector<double> ones(t + 2, 1.0);
  ones[t] = ones[t + 1] = 0.0;
  prog.add_constraint(std::move(ones), lp::Relation::Equal, 1.0);
  const auto sol = lp::solve(prog, deadline);
  if (sol.status != lp::Status::Optimal) throw lp::LpError("ks+: support LP did not solve");
  Vector out = Vector::Zero(pay.cols());
  for (std::size_t c = 0; c < t; ++c) out(support[c]) = std::max(0.0, sol.x[c]);
  return out / out.sum();
}

}  // namespace detail

struct KsPlusParts {
  ApproxResult ks;
  MixedProfile two_by_two;
  double two_by_two_eps = 1.0;
  MixedProfile zero_sum_support;
  double zero_sum_support_eps = 1.0;
};

inline KsPlusParts ks_plus_parts(const Game& g, const Deadline& deadline = Deadline::never()) {
  const Matrix& r = g.row_payoffs();
  const Matrix& c = g.col_payoffs();
  const Index m = g.rows(), n = g.cols();
  KsPlusParts parts;
  parts.ks = ks(g, deadline);

  // 2x2 supports. y = q e_j1 + (1-q) e_j2 fixes the row side; x likewise the
  // column side, so each side is a one-dimensional convex problem.
  parts.two_by_two = parts.ks.profile;
  parts.two_by_two_eps = std::numeric_limits<double>::infinity();
  if (m >= 2 && n >= 2) {
    std::vector<detail::Envelope> col_env;  // indexed by column pair
    std::vector<std::pair<Index, Index>> col_pairs;
    for (Index j1 = 0; j1 < n; ++j1)
      for (Index j2 = j1 + 1; j2 < n; ++j2) {
        std::vector<std::pair<double, double>> lines(static_cast<std::size_t>(m));
        for (Index k = 0; k < m; ++k) lines[static_cast<std::size_t>(k)] = {r(k, j2), r(k, j1) - r(k, j2)};
        col_env.push_back(detail::upper_envelope(std::move(lines)));
        col_pairs.emplace_back(j1, j2);
      }
    double best22 = std::numeric_limits<double>::infinity();
    Index bi1 = 0, bi2 = 1, bj1 = 0, bj2 = 1;
    double bp = 0.0, bq = 0.0;
    for (Index i1 = 0; i1 < m; ++i1) {
      deadline.check();
      for (Index i2 = i1 + 1; i2 < m; ++i2) {
        std::vector<std::pair<double, double>> lines(static_cast<std::size_t>(n));
        for (Index k = 0; k < n; ++k) lines[static_cast<std::size_t>(k)] = {c(i2, k), c(i1, k) - c(i2, k)};
        const detail::Envelope row_env = detail::upper_envelope(std::move(lines));
        for (std::size_t cp = 0; cp < col_pairs.size(); ++cp) {
          const auto [j1, j2] = col_pairs[cp];
          const auto a = detail::min_gap(col_env[cp], r(i1, j2), r(i1, j1) - r(i1, j2), r(i2, j2),
                                         r(i2, j1) - r(i2, j2));
          if (a.first >= best22) continue;
          const auto b = detail::min_gap(row_env, c(i2, j1), c(i1, j1) - c(i2, j1), c(i2, j2),
                                         c(i1, j2) - c(i2, j2));
          const double e = std::max(a.first, b.first);
          if (e < best22) {
            best22 = e;
            bi1 = i1, bi2 = i2, bj1 = j1, bj2 = j2;
            bq = a.second;
            bp = b.second;
          }
        }
      }
    }
    MixedProfile p{Vector::Zero(m), Vector::Zero(n)};
    p.x(bi1) += bp;
    p.x(bi2) += 1.0 - bp;
    p.y(bj1) += bq;
    p.y(bj2) += 1.0 - bq;
    parts.two_by_two_eps = epsilon(g, p, EpsKind::WellSupported);
    parts.two_by_two = std::move(p);
  }

  // Supports of the zero-sum equilibrium.
  const MixedProfile zs = zero_sum_profile(g, deadline);
  const auto s_rows = support_of(zs.x, 1e-9);
  const auto s_cols = support_of(zs.y, 1e-9);
  Vector y = detail::min_spread_strategy(r, s_rows, s_cols, deadline);
  Vector x = detail::min_spread_strategy(Matrix(c.transpose()), s_cols, s_rows, deadline);
  parts.zero_sum_support = {std::move(x), std::move(y)};
  parts.zero_sum_support_eps = epsilon(g, parts.zero_sum_support, EpsKind::WellSupported);
  return parts;
}

inline ApproxResult ks_plus(const Game& g, const Deadline& deadline = Deadline::never()) {
  Stopwatch sw;
  KsPlusParts parts = ks_plus_parts(g, deadline);
  MixedProfile best = parts.ks.profile;
  double e = parts.ks.eps;
  if (parts.two_by_two_eps < e) {
    e = parts.two_by_two_eps;
    best = parts.two_by_two;
  }
  if (parts.zero_sum_support_eps < e) best = parts.zero_sum_support;
  return detail::finish(g, std::move(best), EpsKind::WellSupported, "ksplus", sw);
}

}  // namespace bimatrix::approx

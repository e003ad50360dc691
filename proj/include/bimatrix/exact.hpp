#pragma once

// Exact equilibrium algorithms: support enumeration and Lemke-Howson.

#include "bimatrix/deadline.hpp"
#include "bimatrix/game.hpp"
#include "bimatrix/rational.hpp"
#include "bimatrix/verify.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

namespace bimatrix::exact {

using verify::SupportPair;

// ---------------------------------------------------------------------------
// Support enumeration

enum class SearchStatus { Found, Exhausted, TimedOut };

struct SeOptions {
  Deadline deadline;
  // Cheap floating-point rejection before the exact check. Only rejects a
  // pair when a nondegenerate float system proves it infeasible.
  bool float_prefilter = true;
  // Called for every support pair in visiting order.
  std::function<void(const SupportPair&)> on_visit;
};

struct SeResult {
  SearchStatus status = SearchStatus::Exhausted;
  std::optional<RationalProfile> profile;
  SupportPair support;
  long pairs_visited = 0;
  long exact_checks = 0;
};

// Support-size pairs (a, b) with a + b == total: the equal pair first, then
// by growing |a - b|, smaller row support first.
inline std::vector<std::pair<std::size_t, std::size_t>> size_pairs(std::size_t total,
                                                                   std::size_t m, std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 1; a < total; ++a) {
    const std::size_t b = total - a;
    if (a <= m && b <= n) out.emplace_back(a, b);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& l, const auto& r) {
    const auto dl = l.first > l.second ? l.first - l.second : l.second - l.first;
    const auto dr = r.first > r.second ? r.first - r.second : r.second - r.first;
    return dl < dr;
  });
  return out;
}

// Advances `c` to the next k-combination of {0..n-1} in lexicographic order.
inline bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
  const std::size_t k = c.size();
  std::size_t i = k;
  while (i > 0 && c[i - 1] == n - k + (i - 1)) --i;
  if (i == 0) return false;
  ++c[i - 1];
  for (std::size_t t = i; t < k; ++t) c[t] = c[t - 1] + 1;
  return true;
}

namespace detail {

enum class Verdict { Reject, Plausible };

// Float version of one side of the support check: the mixed side plays on
// `mixed`, every response in `indiff` must be a best response. `a(i, j)` is
// the responder's payoff. Rank-deficient systems are left to the exact check.
inline Verdict float_side(const Matrix& a, bool transpose, const std::vector<std::size_t>& indiff,
                          const std::vector<std::size_t>& mixed) {
  constexpr double tol = 1e-7;
  auto pay = [&](std::size_t resp, std::size_t mix) {
    return transpose ? a(static_cast<Index>(mix), static_cast<Index>(resp))
                     : a(static_cast<Index>(resp), static_cast<Index>(mix));
  };
  const auto k = static_cast<Index>(indiff.size());
  const auto t = static_cast<Index>(mixed.size());
  Matrix sys = Matrix::Zero(k + 1, t + 1);
  Vector rhs = Vector::Zero(k + 1);
  for (Index r = 0; r < k; ++r) {
    for (Index c = 0; c < t; ++c) sys(r, c) = pay(indiff[static_cast<std::size_t>(r)], mixed[static_cast<std::size_t>(c)]);
    sys(r, t) = -1.0;
  }
  for (Index c = 0; c < t; ++c) sys(k, c) = 1.0;
  rhs(k) = 1.0;
  Eigen::ColPivHouseholderQR<Matrix> qr(sys);
  qr.setThreshold(1e-9);
  if (qr.rank() < t + 1) return Verdict::Plausible;
  const Vector sol = qr.solve(rhs);
  if ((sys * sol - rhs).cwiseAbs().maxCoeff() > tol) return Verdict::Reject;
  for (Index c = 0; c < t; ++c)
    if (sol(c) < -tol) return Verdict::Reject;
  const double u = sol(t);
  const Index responses = transpose ? a.cols() : a.rows();
  std::vector<char> in(static_cast<std::size_t>(responses), 0);
  for (auto i : indiff) in[i] = 1;
  for (Index i = 0; i < responses; ++i) {
    if (in[static_cast<std::size_t>(i)]) continue;
    double v = 0.0;
    for (Index c = 0; c < t; ++c) v += pay(static_cast<std::size_t>(i), mixed[static_cast<std::size_t>(c)]) * sol(c);
    if (v > u + tol) return Verdict::Reject;
  }
  return Verdict::Plausible;
}

}  // namespace detail

// Visits support pairs by total size, smallest first, and returns the first
// pair certified by the exact checker on `exact_game`; `g` is its floating
// point view, used only by the prefilter. Unequal sizes are included, so the
// search is complete on degenerate games too.
inline SeResult support_enumeration(const Game& g, const RationalGame& exact_game,
                                    const SeOptions& opt = {}) {
  const auto m = static_cast<std::size_t>(g.rows());
  const auto n = static_cast<std::size_t>(g.cols());
  if (exact_game.rows() != m || exact_game.cols() != n)
    throw std::invalid_argument("support_enumeration: exact game has a different shape");
  SeResult res;
  for (std::size_t total = 2; total <= m + n; ++total) {
    for (const auto& [a, b] : size_pairs(total, m, n)) {
      std::vector<std::size_t> rows(a);
      for (std::size_t i = 0; i < a; ++i) rows[i] = i;
      do {
        std::vector<std::size_t> cols(b);
        for (std::size_t j = 0; j < b; ++j) cols[j] = j;
        do {
          if ((res.pairs_visited & 1023) == 0 && opt.deadline.expired()) {
            res.status = SearchStatus::TimedOut;
            return res;
          }
          ++res.pairs_visited;
          SupportPair sp{rows, cols};
          if (opt.on_visit) opt.on_visit(sp);
          if (opt.float_prefilter) {
            // The overdetermined side first: it rejects most pairs.
            const bool x_first = a <= b;
            auto x_side = [&] { return detail::float_side(g.col_payoffs(), true, cols, rows); };
            auto y_side = [&] { return detail::float_side(g.row_payoffs(), false, rows, cols); };
            if ((x_first ? x_side() : y_side()) == detail::Verdict::Reject) continue;
            if ((x_first ? y_side() : x_side()) == detail::Verdict::Reject) continue;
          }
          ++res.exact_checks;
          if (auto p = verify::check_support_equilibrium(exact_game, sp)) {
            res.status = SearchStatus::Found;
            res.profile = std::move(p);
            res.support = std::move(sp);
            return res;
          }
        } while (next_combination(cols, n));
      } while (next_combination(rows, m));
    }
  }
  res.status = SearchStatus::Exhausted;
  return res;
}

inline SeResult support_enumeration(const Game& g, const SeOptions& opt = {}) {
  return support_enumeration(g, RationalGame::from(g), opt);
}

// ---------------------------------------------------------------------------
// Lemke-Howson

struct PivotLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LhOptions {
  Deadline deadline;
  long max_pivots = 0;  // 0: derived from the game size
  bool record_bases = false;
};

struct LhResult {
  MixedProfile profile;                   // exact refit when available
  std::optional<RationalProfile> exact;   // certified equilibrium
  SupportPair support;
  long pivots = 0;
  // Sorted basis labels of both tableaux after every pivot (when recorded).
  std::vector<std::vector<int>> bases;
};

namespace detail {

// Dictionary of one best-response polytope: rows are basic variables,
// columns 0..m+n-1 are all variables indexed by their label, last column is
// the right-hand side.
struct LhTableau {
  Matrix t;
  std::vector<int> basis;       // label of the basic variable of each row
  std::vector<int> slack_cols;  // columns that start basic (B^-1 lives here)

  int lex_min_ratio(int col) const {
    constexpr double eps = 1e-12;
    const Index rhs = t.cols() - 1;
    int best = -1;
    for (Index r = 0; r < t.rows(); ++r) {
      const double piv = t(r, col);
      if (piv <= eps) continue;
      if (best < 0) {
        best = static_cast<int>(r);
        continue;
      }
      const double pb = t(best, col);
      // Compare (rhs, B^-1 row) / pivot lexicographically.
      auto cmp = [&](double a, double b) {
        const double scale = std::max({1.0, std::abs(a), std::abs(b)});
        if (a < b - 1e-11 * scale) return -1;
        if (a > b + 1e-11 * scale) return 1;
        return 0;
      };
      int c = cmp(t(r, rhs) / piv, t(best, rhs) / pb);
      for (std::size_t k = 0; c == 0 && k < slack_cols.size(); ++k)
        c = cmp(t(r, slack_cols[k]) / piv, t(best, slack_cols[k]) / pb);
      if (c < 0) best = static_cast<int>(r);
    }
    return best;
  }

  // Returns the label that leaves the basis.
  int pivot(int row, int col) {
    const double piv = t(row, col);
    t.row(row) /= piv;
    for (Index r = 0; r < t.rows(); ++r) {
      if (r == row) continue;
      const double f = t(r, col);
      if (f != 0.0) t.row(r) -= f * t.row(row);
    }
    const int leaving = basis[static_cast<std::size_t>(row)];
    basis[static_cast<std::size_t>(row)] = col;
    return leaving;
  }

  double value_of(int label) const {
    for (std::size_t r = 0; r < basis.size(); ++r)
      if (basis[r] == label) return t(static_cast<Index>(r), t.cols() - 1);
    return 0.0;
  }
  bool is_basic(int label) const {
    return std::find(basis.begin(), basis.end(), label) != basis.end();
  }
};

inline double saturating_binomial(double n, double k) {
  double r = 1.0;
  for (double i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > 1e12) return 1e12;
  }
  return r;
}

}  // namespace detail

// Complementary pivoting from the artificial equilibrium, dropping
// `initial_label` (0-based; rows are 0..m-1, columns m..m+n-1). The terminal
// supports are refit in exact arithmetic and certified.
inline LhResult lemke_howson(const Game& g, const RationalGame& eg, int initial_label = 0,
                             const LhOptions& opt = {}) {
  const int m = static_cast<int>(g.rows());
  const int n = static_cast<int>(g.cols());
  if (initial_label < 0 || initial_label >= m + n)
    throw std::out_of_range("lemke_howson: label out of range");
  const int w = m + n;
  // Strictly positive payoffs keep both polytopes bounded.
  const double rshift = 1.0 - g.row_payoffs().minCoeff();
  const double cshift = 1.0 - g.col_payoffs().minCoeff();

  // P = {x >= 0 : C^T x <= 1}: rows j, variables x_i (label i), s_j (label m+j).
  detail::LhTableau p;
  p.t = Matrix::Zero(n, w + 1);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) p.t(j, i) = g.col_payoffs()(i, j) + cshift;
    p.t(j, m + j) = 1.0;
    p.t(j, w) = 1.0;
    p.basis.push_back(m + j);
    p.slack_cols.push_back(m + j);
  }
  // Q = {y >= 0 : R y <= 1}: rows i, variables r_i (label i), y_j (label m+j).
  detail::LhTableau q;
  q.t = Matrix::Zero(m, w + 1);
  for (int i = 0; i < m; ++i) {
    q.t(i, i) = 1.0;
    for (int j = 0; j < n; ++j) q.t(i, m + j) = g.row_payoffs()(i, j) + rshift;
    q.t(i, w) = 1.0;
    q.basis.push_back(i);
    q.slack_cols.push_back(i);
  }

  long limit = opt.max_pivots;
  if (limit <= 0)
    limit = static_cast<long>(std::min(1e8, 10.0 * detail::saturating_binomial(w, std::min(m, n)) + 100.0));

  LhResult res;
  std::set<std::vector<int>> seen;
  auto record = [&] {
    if (!opt.record_bases) return;
    std::vector<int> key;
    for (int l : p.basis) key.push_back(l);
    for (int l : q.basis) key.push_back(w + l);
    std::sort(key.begin(), key.end());
    res.bases.push_back(key);
  };

  int entering = initial_label;
  bool in_p = initial_label < m;  // x_k enters P; y_j enters Q
  for (;;) {
    opt.deadline.check();
    if (res.pivots >= limit) throw PivotLimitError("lemke_howson: pivot limit exceeded");
    detail::LhTableau& tab = in_p ? p : q;
    const int row = tab.lex_min_ratio(entering);
    if (row < 0) throw std::runtime_error("lemke_howson: unbounded pivot column");
    const int leaving = tab.pivot(row, entering);
    ++res.pivots;
    record();
    if (leaving == initial_label) break;
    entering = leaving;
    in_p = !in_p;
  }

  Vector x = Vector::Zero(m), y = Vector::Zero(n);
  for (int i = 0; i < m; ++i) x(i) = std::max(0.0, p.value_of(i));
  for (int j = 0; j < n; ++j) y(j) = std::max(0.0, q.value_of(m + j));
  if (!(x.sum() > 0.0) || !(y.sum() > 0.0)) throw std::runtime_error("lemke_howson: empty terminal basis");
  x /= x.sum();
  y /= y.sum();
  res.profile = {x, y};

  // Exact refit: first on the positive supports, then on the full basic sets
  // (degenerate terminal bases can carry zero-valued basic variables).
  auto support = [](const Vector& v, double tol) {
    std::vector<std::size_t> s;
    for (Index i = 0; i < v.size(); ++i)
      if (v(i) > tol) s.push_back(static_cast<std::size_t>(i));
    return s;
  };
  std::vector<SupportPair> candidates{{support(x, 1e-9), support(y, 1e-9)}};
  {
    SupportPair basic;
    for (int i = 0; i < m; ++i)
      if (p.is_basic(i)) basic.rows.push_back(static_cast<std::size_t>(i));
    for (int j = 0; j < n; ++j)
      if (q.is_basic(m + j)) basic.cols.push_back(static_cast<std::size_t>(j));
    candidates.push_back(std::move(basic));
  }
  for (auto& sp : candidates) {
    if (sp.rows.empty() || sp.cols.empty()) continue;
    if (auto e = verify::check_support_equilibrium(eg, sp)) {
      res.profile = to_double(*e);
      res.exact = std::move(e);
      res.support = std::move(sp);
      return res;
    }
  }
  res.support = std::move(candidates.front());
  return res;
}

inline LhResult lemke_howson(const Game& g, int initial_label = 0, const LhOptions& opt = {}) {
  return lemke_howson(g, RationalGame::from(g), initial_label, opt);
}

}  // namespace bimatrix::exact

#pragma once

// Exact-arithmetic certification: the epsilon achieved by a profile (both
// notions) and the support-pair equilibrium check. No rounding anywhere.

#include "bimatrix/game.hpp"
#include "bimatrix/lp.hpp"
#include "bimatrix/rational.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

namespace bimatrix::verify {

struct SupportPair {
  std::vector<std::size_t> rows;  // S
  std::vector<std::size_t> cols;  // T
};

inline void check_stochastic(const RationalVector& v, std::size_t expected, const char* who) {
  if (v.size() != expected)
    throw std::invalid_argument(std::string(who) + ": profile dimension mismatch");
  Rational total = 0;
  for (const auto& e : v) {
    if (sgn(e) < 0) throw std::invalid_argument(std::string(who) + ": negative probability");
    total += e;
  }
  if (total != 1) throw std::invalid_argument(std::string(who) + ": probabilities do not sum to 1");
}

// (R y)_i for every row i.
inline RationalVector row_payoffs(const RationalMatrix& r, const RationalVector& y) {
  RationalVector out(r.rows());
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t j = 0; j < r.cols(); ++j)
      if (sgn(y[j]) != 0) out[i] += r(i, j) * y[j];
  return out;
}

// (x^T C)_j for every column j.
inline RationalVector col_payoffs(const RationalMatrix& c, const RationalVector& x) {
  RationalVector out(c.cols());
  for (std::size_t i = 0; i < c.rows(); ++i) {
    if (sgn(x[i]) == 0) continue;
    for (std::size_t j = 0; j < c.cols(); ++j) out[j] += x[i] * c(i, j);
  }
  return out;
}

inline Rational exact_epsilon(const RationalGame& g, const RationalProfile& p, EpsKind kind) {
  if (g.row.rows() != g.col.rows() || g.row.cols() != g.col.cols())
    throw std::invalid_argument("exact_epsilon: payoff matrices differ in shape");
  check_stochastic(p.x, g.rows(), "exact_epsilon");
  check_stochastic(p.y, g.cols(), "exact_epsilon");
  const RationalVector ry = row_payoffs(g.row, p.y);
  const RationalVector xc = col_payoffs(g.col, p.x);
  const Rational best_row = *std::max_element(ry.begin(), ry.end());
  const Rational best_col = *std::max_element(xc.begin(), xc.end());
  if (kind == EpsKind::ApproxNE) {
    Rational row_value = 0, col_value = 0;
    for (std::size_t i = 0; i < ry.size(); ++i) row_value += p.x[i] * ry[i];
    for (std::size_t j = 0; j < xc.size(); ++j) col_value += p.y[j] * xc[j];
    const Rational a = best_row - row_value;
    const Rational b = best_col - col_value;
    return a > b ? a : b;
  }
  Rational worst = 0;
  for (std::size_t i = 0; i < ry.size(); ++i)
    if (sgn(p.x[i]) > 0 && best_row - ry[i] > worst) worst = best_row - ry[i];
  for (std::size_t j = 0; j < xc.size(); ++j)
    if (sgn(p.y[j]) > 0 && best_col - xc[j] > worst) worst = best_col - xc[j];
  return worst;
}

// Convenience overload for floating-point inputs: the game is converted
// exactly and the profile is made exactly stochastic first.
inline Rational exact_epsilon(const Game& g, const MixedProfile& p, EpsKind kind) {
  return exact_epsilon(RationalGame::from(g), to_rational_profile(p), kind);
}

namespace detail {

enum class SolveKind { Unique, Inconsistent, Underdetermined };

// Gauss-Jordan elimination with partial pivoting (first nonzero pivot).
// `a` is k x (w+1) augmented. On Unique, `solution` has w entries.
inline SolveKind solve_exact(std::vector<RationalVector> a, std::size_t w,
                             RationalVector& solution) {
  const std::size_t k = a.size();
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < w && row < k; ++col) {
    std::size_t sel = row;
    while (sel < k && sgn(a[sel][col]) == 0) ++sel;
    if (sel == k) continue;
    std::swap(a[sel], a[row]);
    const Rational piv = a[row][col];
    for (std::size_t c = col; c <= w; ++c) a[row][c] /= piv;
    for (std::size_t r = 0; r < k; ++r) {
      if (r == row || sgn(a[r][col]) == 0) continue;
      const Rational f = a[r][col];
      for (std::size_t c = col; c <= w; ++c) a[r][c] -= f * a[row][c];
    }
    pivot_col.push_back(col);
    ++row;
  }
  for (std::size_t r = row; r < k; ++r)
    if (sgn(a[r][w]) != 0) return SolveKind::Inconsistent;
  if (row < w) return SolveKind::Underdetermined;
  solution.assign(w, Rational(0));
  for (std::size_t r = 0; r < row; ++r) solution[pivot_col[r]] = a[r][w];
  return SolveKind::Unique;
}

// Finds a mixed strategy supported on `mixed_support` against which every
// response in `indifferent` earns the same payoff and no response earns more.
// `payoff(i, j)` is the payoff of response i against mixed-side strategy j.
template <class PayoffFn>
std::optional<RationalVector> indifference_strategy(PayoffFn payoff, std::size_t num_responses,
                                                    std::size_t num_mixed,
                                                    const std::vector<std::size_t>& indifferent,
                                                    const std::vector<std::size_t>& mixed_support) {
  const std::size_t t = mixed_support.size();
  // Unknowns: probabilities on mixed_support, then the common value u.
  std::vector<RationalVector> sys;
  sys.reserve(indifferent.size() + 1);
  for (std::size_t i : indifferent) {
    RationalVector row(t + 2);
    for (std::size_t c = 0; c < t; ++c) row[c] = payoff(i, mixed_support[c]);
    row[t] = -1;
    sys.push_back(std::move(row));
  }
  RationalVector sum_row(t + 2);
  for (std::size_t c = 0; c < t; ++c) sum_row[c] = 1;
  sum_row[t + 1] = 1;
  sys.push_back(std::move(sum_row));

  std::vector<char> in_set(num_responses, 0);
  for (std::size_t i : indifferent) in_set[i] = 1;

  RationalVector sol;
  const SolveKind kind = solve_exact(sys, t + 1, sol);
  if (kind == SolveKind::Inconsistent) return std::nullopt;
  if (kind == SolveKind::Unique) {
    for (std::size_t c = 0; c < t; ++c)
      if (sgn(sol[c]) < 0) return std::nullopt;
    const Rational& u = sol[t];
    for (std::size_t k = 0; k < num_responses; ++k) {
      if (in_set[k]) continue;
      Rational v = 0;
      for (std::size_t c = 0; c < t; ++c) v += payoff(k, mixed_support[c]) * sol[c];
      if (v > u) return std::nullopt;
    }
    RationalVector full(num_mixed);
    for (std::size_t c = 0; c < t; ++c) full[mixed_support[c]] = sol[c];
    return full;
  }

  // Solution manifold: search it exactly for a feasible point.
  lp::LinearProgram<Rational> prog;
  prog.sense = lp::Sense::Minimize;
  for (std::size_t c = 0; c < t; ++c) prog.add_variable(Rational(0));
  prog.add_variable(Rational(0), std::nullopt, std::nullopt);  // u, free
  for (std::size_t k = 0; k < num_responses; ++k) {
    std::vector<Rational> row(t + 1);
    for (std::size_t c = 0; c < t; ++c) row[c] = payoff(k, mixed_support[c]);
    row[t] = -1;
    prog.add_constraint(std::move(row), in_set[k] ? lp::Relation::Equal : lp::Relation::LessEqual,
                        Rational(0));
  }
  std::vector<Rational> ones(t + 1, Rational(1));
  ones[t] = 0;
  prog.add_constraint(std::move(ones), lp::Relation::Equal, Rational(1));
  const auto res = lp::Simplex<Rational>().solve(prog);
  if (res.status != lp::Status::Optimal) return std::nullopt;
  RationalVector full(num_mixed);
  for (std::size_t c = 0; c < t; ++c) full[mixed_support[c]] = res.x[c];
  return full;
}

}  // namespace detail

// Exact equilibrium on the given supports: the column strategy on T makes
// every row in S a best response, the row strategy on S makes every column in
// T a best response. Entries outside the supports are zero. Square
// nonsingular systems are solved directly; singular ones are searched with an
// exact simplex, so degenerate games are handled as well.
inline std::optional<RationalProfile> check_support_equilibrium(const RationalGame& g,
                                                                const SupportPair& sp) {
  const std::size_t m = g.rows(), n = g.cols();
  auto valid = [](const std::vector<std::size_t>& s, std::size_t bound) {
    if (s.empty()) return false;
    for (std::size_t k = 0; k < s.size(); ++k)
      if (s[k] >= bound || (k > 0 && s[k] <= s[k - 1])) return false;
    return true;
  };
  if (!valid(sp.rows, m) || !valid(sp.cols, n))
    throw std::invalid_argument("check_support_equilibrium: supports must be sorted, unique, in range");

  auto y = detail::indifference_strategy(
      [&](std::size_t i, std::size_t j) -> const Rational& { return g.row(i, j); }, m, n, sp.rows,
      sp.cols);
  if (!y) return std::nullopt;
  auto x = detail::indifference_strategy(
      [&](std::size_t j, std::size_t i) -> const Rational& { return g.col(i, j); }, n, m, sp.cols,
      sp.rows);
  if (!x) return std::nullopt;
  return RationalProfile{std::move(*x), std::move(*y)};
}

}  // namespace bimatrix::verify

#pragma once

// Dense two-phase simplex over a generic ordered field (double or GMP
// rationals) and the zero-sum matrix game solver built on it.
//
// Pricing is Dantzig's rule with lowest-index tie breaking; during a long run
// of degenerate pivots the solver uses Bland's rule until the objective moves
// again, which rules out cycling. In doubles the ratio test is otherwise
// two-pass (Harris) and prefers large pivots; under Bland, and always for
// rationals, ties go to the lowest basic variable index.

#include "bimatrix/deadline.hpp"
#include "bimatrix/game.hpp"

#include <gmpxx.h>

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace bimatrix::lp {

enum class Relation { LessEqual, Equal, GreaterEqual };
enum class Sense { Minimize, Maximize };
enum class Status { Optimal, Infeasible, Unbounded };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
  }
  return "?";
}

struct LpError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class Scalar>
struct Tolerances;

template <>
struct Tolerances<double> {
  static constexpr double pivot = 1e-9;
  static constexpr double feasibility = 1e-9;
  static constexpr double optimality = 1e-7;
  static constexpr double ratio_tie = 1e-12;
  static bool is_zero(double v, double tol) { return std::abs(v) <= tol; }
};

template <>
struct Tolerances<mpq_class> {
  static constexpr int pivot = 0;
  static constexpr int feasibility = 0;
  static constexpr int optimality = 0;
  static constexpr int ratio_tie = 0;
  static bool is_zero(const mpq_class& v, int) { return sgn(v) == 0; }
};

template <class Scalar>
struct LinearProgram {
  Sense sense = Sense::Minimize;
  std::vector<Scalar> cost;
  std::vector<std::optional<Scalar>> lower;  // nullopt: unbounded below
  std::vector<std::optional<Scalar>> upper;  // nullopt: unbounded above
  std::vector<std::vector<Scalar>> rows;
  std::vector<Relation> relations;
  std::vector<Scalar> rhs;

  std::size_t num_variables() const { return cost.size(); }
  std::size_t num_constraints() const { return rows.size(); }

  std::size_t add_variable(Scalar c, std::optional<Scalar> lo = Scalar(0),
                           std::optional<Scalar> hi = std::nullopt) {
    cost.push_back(std::move(c));
    lower.push_back(std::move(lo));
    upper.push_back(std::move(hi));
    for (auto& r : rows) r.emplace_back(0);
    return cost.size() - 1;
  }

  std::size_t add_constraint(std::vector<Scalar> coeffs, Relation rel, Scalar b) {
    if (coeffs.size() != cost.size())
      throw std::invalid_argument("constraint width does not match variable count");
    rows.push_back(std::move(coeffs));
    relations.push_back(rel);
    rhs.push_back(std::move(b));
    return rows.size() - 1;
  }

  void validate() const {
    const std::size_t n = cost.size();
    if (lower.size() != n || upper.size() != n)
      throw std::invalid_argument("bound vectors do not match variable count");
    if (relations.size() != rows.size() || rhs.size() != rows.size())
      throw std::invalid_argument("constraint arrays differ in length");
    for (const auto& r : rows)
      if (r.size() != n) throw std::invalid_argument("ragged constraint matrix");
    for (std::size_t k = 0; k < n; ++k)
      if (lower[k] && upper[k] && *upper[k] < *lower[k])
        throw std::invalid_argument("variable has empty bound interval");
  }
};

template <class Scalar>
struct Solution {
  Status status = Status::Infeasible;
  Scalar objective{};
  std::vector<Scalar> x;
  // Sensitivity of the optimal objective to each constraint's right-hand side.
  std::vector<Scalar> duals;
  long pivots = 0;
};

namespace detail {

template <class Scalar>
class Tableau {
  using Tol = Tolerances<Scalar>;

 public:
  Tableau(std::size_t rows, std::size_t cols)
      : m_(rows), width_(cols + 1), data_((rows + 1) * (cols + 1)), basis_(rows) {}

  Scalar& at(std::size_t r, std::size_t c) { return data_[r * width_ + c]; }
  const Scalar& at(std::size_t r, std::size_t c) const { return data_[r * width_ + c]; }
  Scalar& rhs(std::size_t r) { return at(r, width_ - 1); }
  const Scalar& rhs(std::size_t r) const { return at(r, width_ - 1); }
  // Objective row holds reduced costs; its rhs slot holds -(objective value).
  Scalar& obj(std::size_t c) { return at(m_, c); }
  std::size_t cols() const { return width_ - 1; }
  std::size_t rows() const { return m_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const Scalar piv = at(pr, pc);
    Scalar* prow = &data_[pr * width_];
    for (std::size_t c = 0; c < width_; ++c) prow[c] /= piv;
    prow[pc] = Scalar(1);
    for (std::size_t r = 0; r <= m_; ++r) {
      if (r == pr) continue;
      Scalar* row = &data_[r * width_];
      const Scalar f = row[pc];
      if (Tol::is_zero(f, 0)) continue;
      for (std::size_t c = 0; c < width_; ++c)
        if (!Tol::is_zero(prow[c], 0)) row[c] -= f * prow[c];
      row[pc] = Scalar(0);
    }
    basis_[pr] = pc;
  }

 private:
  std::size_t m_;
  std::size_t width_;
  std::vector<Scalar> data_;
  std::vector<std::size_t> basis_;
};

// How each original variable maps onto nonnegative standard-form columns.
template <class Scalar>
struct VarMap {
  std::size_t pos = 0;            // column of x' (or x+)
  std::optional<std::size_t> neg;  // column of x- for free variables
  Scalar offset{};                 // x = offset + sign * x'
  int sign = 1;
};

}  // namespace detail

template <class Scalar>
class Simplex {
  using Tol = Tolerances<Scalar>;

 public:
  explicit Simplex(const Deadline& deadline = Deadline::never(), long max_pivots = 0)
      : deadline_(deadline), max_pivots_(max_pivots) {}

  Solution<Scalar> solve(const LinearProgram<Scalar>& lp) {
    lp.validate();
    build(lp);
    Solution<Scalar> sol;
    // Phase 1 over artificials.
    if (num_art_ > 0) {
      std::vector<Scalar> c1(total_cols_, Scalar(0));
      for (std::size_t a = 0; a < num_art_; ++a) c1[art_begin_ + a] = Scalar(1);
      set_objective(c1);
      run(/*allow_artificial=*/true);
      if (-tab_->obj(total_cols_) > Scalar(Tol::feasibility)) {
        sol.status = Status::Infeasible;
        sol.pivots = pivots_;
        return sol;
      }
      drive_out_artificials();
    }
    set_objective(std_cost_);
    if (!run(/*allow_artificial=*/false)) {
      sol.status = Status::Unbounded;
      sol.pivots = pivots_;
      return sol;
    }
    sol.status = Status::Optimal;
    sol.pivots = pivots_;
    extract(lp, sol);
    return sol;
  }

 private:
  void build(const LinearProgram<Scalar>& lp) {
    const std::size_t n = lp.num_variables();
    vars_.assign(n, {});
    std::size_t col = 0;
    std::vector<std::pair<std::size_t, Scalar>> bound_rows;  // (std column, width)
    for (std::size_t k = 0; k < n; ++k) {
      auto& v = vars_[k];
      if (lp.lower[k]) {
        v.offset = *lp.lower[k];
        v.sign = 1;
        v.pos = col++;
        if (lp.upper[k]) bound_rows.emplace_back(v.pos, *lp.upper[k] - *lp.lower[k]);
      } else if (lp.upper[k]) {
        v.offset = *lp.upper[k];
        v.sign = -1;
        v.pos = col++;
      } else {
        v.offset = Scalar(0);
        v.sign = 1;
        v.pos = col++;
        v.neg = col++;
      }
    }
    const std::size_t num_struct = col;
    const std::size_t m = lp.num_constraints() + bound_rows.size();

    // Standard-form rows (before slack/artificial columns).
    std::vector<std::vector<Scalar>> a(m, std::vector<Scalar>(num_struct, Scalar(0)));
    std::vector<Relation> rel(m);
    std::vector<Scalar> b(m);
    for (std::size_t r = 0; r < lp.num_constraints(); ++r) {
      Scalar rhs = lp.rhs[r];
      for (std::size_t k = 0; k < n; ++k) {
        const Scalar& coef = lp.rows[r][k];
        if (Tol::is_zero(coef, 0)) continue;
        const auto& v = vars_[k];
        rhs -= coef * v.offset;
        a[r][v.pos] += v.sign > 0 ? coef : Scalar(-coef);
        if (v.neg) a[r][*v.neg] -= coef;
      }
      rel[r] = lp.relations[r];
      b[r] = rhs;
    }
    for (std::size_t t = 0; t < bound_rows.size(); ++t) {
      const std::size_t r = lp.num_constraints() + t;
      a[r][bound_rows[t].first] = Scalar(1);
      rel[r] = Relation::LessEqual;
      b[r] = bound_rows[t].second;
    }

    row_sign_.assign(m, 1);
    std::size_t num_slack = 0;
    num_art_ = 0;
    for (std::size_t r = 0; r < m; ++r) {
      if (b[r] < Scalar(0)) {
        row_sign_[r] = -1;
        b[r] = -b[r];
        for (auto& e : a[r]) e = -e;
        if (rel[r] == Relation::LessEqual) rel[r] = Relation::GreaterEqual;
        else if (rel[r] == Relation::GreaterEqual) rel[r] = Relation::LessEqual;
      }
      if (rel[r] != Relation::Equal) ++num_slack;
      if (rel[r] != Relation::LessEqual) ++num_art_;
    }
    slack_begin_ = num_struct;
    art_begin_ = num_struct + num_slack;
    total_cols_ = art_begin_ + num_art_;
    tab_.emplace(m, total_cols_);
    unit_col_.assign(m, 0);
    std::size_t s = 0, art = 0;
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < num_struct; ++c) tab_->at(r, c) = a[r][c];
      tab_->rhs(r) = b[r];
      if (rel[r] == Relation::LessEqual) {
        tab_->at(r, slack_begin_ + s) = Scalar(1);
        unit_col_[r] = slack_begin_ + s;
        ++s;
      } else {
        if (rel[r] == Relation::GreaterEqual) {
          tab_->at(r, slack_begin_ + s) = Scalar(-1);
          ++s;
        }
        tab_->at(r, art_begin_ + art) = Scalar(1);
        unit_col_[r] = art_begin_ + art;
        ++art;
      }
      tab_->basis()[r] = unit_col_[r];
    }

    std_cost_.assign(total_cols_, Scalar(0));
    const bool maximize = lp.sense == Sense::Maximize;
    for (std::size_t k = 0; k < n; ++k) {
      const Scalar c = maximize ? Scalar(-lp.cost[k]) : lp.cost[k];
      const auto& v = vars_[k];
      std_cost_[v.pos] += v.sign > 0 ? c : Scalar(-c);
      if (v.neg) std_cost_[*v.neg] -= c;
    }
    pivots_ = 0;
  }

  void set_objective(const std::vector<Scalar>& c) {
    auto& t = *tab_;
    for (std::size_t col = 0; col < total_cols_; ++col) t.obj(col) = c[col];
    t.obj(total_cols_) = Scalar(0);
    for (std::size_t r = 0; r < t.rows(); ++r) {
      const Scalar cb = c[t.basis()[r]];
      if (Tol::is_zero(cb, 0)) continue;
      for (std::size_t col = 0; col <= total_cols_; ++col) t.obj(col) -= cb * t.at(r, col);
    }
  }

  // Returns false if the objective is unbounded.
  bool run(bool allow_artificial) {
    auto& t = *tab_;
    const std::size_t limit_col = allow_artificial ? total_cols_ : art_begin_;
    bool bland = false;
    int degenerate_run = 0;
    const long cap = max_pivots_ > 0 ? max_pivots_
                                     : 50 * static_cast<long>(t.rows() + total_cols_) + 1000;
    for (;;) {
      deadline_.check();
      // Phase 1 only needs a feasible basis.
      if (allow_artificial && !(-t.obj(total_cols_) > Scalar(Tol::feasibility))) return true;
      std::optional<std::size_t> enter;
      Scalar best_rc = -Scalar(Tol::optimality);
      for (std::size_t c = 0; c < limit_col; ++c) {
        const Scalar& rc = t.obj(c);
        if (rc < -Scalar(Tol::optimality)) {
          if (bland) {
            enter = c;
            break;
          }
          if (rc < best_rc) {
            best_rc = rc;
            enter = c;
          }
        }
      }
      if (!enter) return true;
      const std::size_t q = *enter;
      std::optional<std::size_t> leave;
      Scalar best_ratio{};
      if constexpr (std::is_same_v<Scalar, double>) {
        if (!bland) {
          // Two passes: the smallest ratio with every right-hand side relaxed
          // by the feasibility tolerance, then the largest pivot among rows
          // within that bound.
          double bound = std::numeric_limits<double>::infinity();
          for (std::size_t r = 0; r < t.rows(); ++r) {
            const double coef = t.at(r, q);
            if (coef > Tol::pivot) bound = std::min(bound, (t.rhs(r) + Tol::feasibility) / coef);
          }
          double best_coef = 0.0;
          for (std::size_t r = 0; r < t.rows(); ++r) {
            const double coef = t.at(r, q);
            if (!(coef > Tol::pivot) || t.rhs(r) / coef > bound) continue;
            if (coef > best_coef) {
              best_coef = coef;
              leave = r;
            }
          }
          if (leave) best_ratio = std::max(0.0, t.rhs(*leave) / best_coef);
        }
      }
      if (!leave) {
        for (std::size_t r = 0; r < t.rows(); ++r) {
          const Scalar& coef = t.at(r, q);
          if (!(coef > Scalar(Tol::pivot))) continue;
          const Scalar ratio = t.rhs(r) / coef;
          if (!leave) {
            leave = r;
            best_ratio = ratio;
            continue;
          }
          const Scalar diff = ratio - best_ratio;
          if (diff < -Scalar(Tol::ratio_tie)) {
            leave = r;
            best_ratio = ratio;
          } else if (!(diff > Scalar(Tol::ratio_tie)) && t.basis()[r] < t.basis()[*leave]) {
            leave = r;
            best_ratio = ratio;
          }
        }
      }
      if (!leave) return false;
      if (Tol::is_zero(best_ratio, Tol::feasibility)) {
        if (++degenerate_run > 50) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
      t.pivot(*leave, q);
      if constexpr (std::is_same_v<Scalar, double>) {
        // Harris steps may leave right-hand sides slightly negative.
        for (std::size_t r = 0; r < t.rows(); ++r)
          if (t.rhs(r) < 0.0 && t.rhs(r) >= -Tol::feasibility) t.rhs(r) = 0.0;
      }
      if (++pivots_ > cap) throw LpError("simplex pivot limit exceeded");
    }
  }

  void drive_out_artificials() {
    auto& t = *tab_;
    for (std::size_t r = 0; r < t.rows(); ++r) {
      if (t.basis()[r] < art_begin_) continue;
      std::optional<std::size_t> col;
      for (std::size_t c = 0; c < art_begin_; ++c) {
        const Scalar& v = t.at(r, c);
        if (v > Scalar(Tol::pivot) || v < -Scalar(Tol::pivot)) {
          col = c;
          break;
        }
      }
      // A row with no structural entries is redundant; its artificial stays
      // basic at zero and can never re-enter.
      if (col) {
        t.pivot(r, *col);
        ++pivots_;
      }
    }
  }

  void extract(const LinearProgram<Scalar>& lp, Solution<Scalar>& sol) {
    auto& t = *tab_;
    std::vector<Scalar> xs(total_cols_, Scalar(0));
    for (std::size_t r = 0; r < t.rows(); ++r) xs[t.basis()[r]] = t.rhs(r);
    const std::size_t n = lp.num_variables();
    sol.x.assign(n, Scalar(0));
    sol.objective = Scalar(0);
    for (std::size_t k = 0; k < n; ++k) {
      const auto& v = vars_[k];
      Scalar val = xs[v.pos];
      if (v.neg) val -= xs[*v.neg];
      sol.x[k] = v.sign > 0 ? Scalar(v.offset + val) : Scalar(v.offset - val);
      sol.objective += lp.cost[k] * sol.x[k];
    }
    const bool maximize = lp.sense == Sense::Maximize;
    sol.duals.assign(lp.num_constraints(), Scalar(0));
    for (std::size_t r = 0; r < lp.num_constraints(); ++r) {
      Scalar y(0);
      for (std::size_t k = 0; k < t.rows(); ++k) {
        const Scalar& cb = std_cost_[t.basis()[k]];
        if (!Tol::is_zero(cb, 0)) y += cb * t.at(k, unit_col_[r]);
      }
      if (row_sign_[r] < 0) y = -y;
      if (maximize) y = -y;
      sol.duals[r] = y;
    }
  }

  Deadline deadline_;
  long max_pivots_;
  std::vector<detail::VarMap<Scalar>> vars_;
  std::optional<detail::Tableau<Scalar>> tab_;
  std::vector<Scalar> std_cost_;
  std::vector<int> row_sign_;
  std::vector<std::size_t> unit_col_;
  std::size_t slack_begin_ = 0;
  std::size_t art_begin_ = 0;
  std::size_t num_art_ = 0;
  std::size_t total_cols_ = 0;
  long pivots_ = 0;
};

template <class Scalar>
Solution<Scalar> solve(const LinearProgram<Scalar>& lp,
                       const Deadline& deadline = Deadline::never()) {
  return Simplex<Scalar>(deadline).solve(lp);
}

struct ZeroSumSolution {
  Vector x;  // maximin strategy of the row (maximizing) player
  Vector y;  // minimax strategy of the column player
  double value = 0.0;
  long pivots = 0;
};

// Row player maximizes x^T M y. Solved through the column player's LP on the
// shifted matrix M' = M - min(M) + 1 (all entries >= 1):
//   max 1^T v  s.t.  M' v <= 1, v >= 0,
// whose optimum is 1/value'; y = v * value' and x comes from the duals.
// Every constraint has a slack, so no phase 1 is needed.
inline ZeroSumSolution solve_zero_sum(const Matrix& payoff,
                                      const Deadline& deadline = Deadline::never()) {
  if (payoff.rows() < 1 || payoff.cols() < 1)
    throw std::invalid_argument("solve_zero_sum: empty matrix");
  if (!payoff.allFinite()) throw std::invalid_argument("solve_zero_sum: non-finite entry");
  const Index m = payoff.rows();
  const Index n = payoff.cols();
  const double shift = 1.0 - payoff.minCoeff();

  LinearProgram<double> lp;
  lp.sense = Sense::Maximize;
  for (Index j = 0; j < n; ++j) lp.add_variable(1.0);
  lp.rows.reserve(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) {
    std::vector<double> row(static_cast<std::size_t>(n));
    for (Index j = 0; j < n; ++j) row[static_cast<std::size_t>(j)] = payoff(i, j) + shift;
    lp.add_constraint(std::move(row), Relation::LessEqual, 1.0);
  }
  const auto sol = solve(lp, deadline);
  if (sol.status != Status::Optimal)
    throw LpError(std::string("zero-sum LP ended ") + to_string(sol.status));

  ZeroSumSolution out;
  out.pivots = sol.pivots;
  double total = 0.0;
  for (double v : sol.x) total += v;
  if (!(total > 0.0)) throw LpError("zero-sum LP returned a degenerate optimum");
  out.y = Vector(n);
  for (Index j = 0; j < n; ++j) out.y(j) = std::max(0.0, sol.x[static_cast<std::size_t>(j)]);
  out.y /= out.y.sum();
  out.x = Vector(m);
  for (Index i = 0; i < m; ++i) out.x(i) = std::max(0.0, sol.duals[static_cast<std::size_t>(i)]);
  const double xs = out.x.sum();
  if (!(xs > 0.0)) throw LpError("zero-sum LP returned degenerate duals");
  out.x /= xs;
  out.value = 1.0 / total - shift;
  return out;
}

}  // namespace bimatrix::lp

#pragma once

// Bimatrix game data model: payoff matrices, mixed profiles, best responses,
// regrets and the two floating-point approximation measures.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bimatrix {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class Side { Row, Column };

// ApproxNE: each player's expected payoff is within eps of a best response.
// WellSupported: every strategy played with positive probability is within
// eps of a best response.
enum class EpsKind { ApproxNE, WellSupported };

inline const char* to_string(EpsKind kind) {
  return kind == EpsKind::ApproxNE ? "ne" : "wsne";
}

inline constexpr double kProbabilityTolerance = 1e-9;

class Game {
 public:
  Game(Matrix row_payoffs, Matrix col_payoffs, std::string name = {})
      : row_(std::move(row_payoffs)),
        col_(std::move(col_payoffs)),
        name_(std::move(name)) {
    if (row_.rows() < 1 || row_.cols() < 1)
      throw std::invalid_argument("Game: payoff matrices must be non-empty");
    if (row_.rows() != col_.rows() || row_.cols() != col_.cols())
      throw std::invalid_argument("Game: payoff matrices differ in shape");
    if (!row_.allFinite() || !col_.allFinite())
      throw std::invalid_argument("Game: payoffs must be finite");
  }

  const Matrix& row_payoffs() const { return row_; }
  const Matrix& col_payoffs() const { return col_; }
  Index rows() const { return row_.rows(); }
  Index cols() const { return row_.cols(); }
  const std::string& name() const { return name_; }

  bool is_normalized() const {
    return row_.minCoeff() >= 0.0 && row_.maxCoeff() <= 1.0 &&
           col_.minCoeff() >= 0.0 && col_.maxCoeff() <= 1.0;
  }

 private:
  Matrix row_;
  Matrix col_;
  std::string name_;
};

struct MixedProfile {
  Vector x;  // row player
  Vector y;  // column player

  static MixedProfile pure(Index m, Index n, Index i, Index j) {
    MixedProfile p{Vector::Zero(m), Vector::Zero(n)};
    p.x(i) = 1.0;
    p.y(j) = 1.0;
    return p;
  }

  static MixedProfile uniform(Index m, Index n) {
    return {Vector::Constant(m, 1.0 / static_cast<double>(m)),
            Vector::Constant(n, 1.0 / static_cast<double>(n))};
  }
};

inline bool is_distribution(const Vector& v, double tol = kProbabilityTolerance) {
  if (v.size() == 0) return false;
  if (!v.allFinite() || v.minCoeff() < -tol) return false;
  return std::abs(v.sum() - 1.0) <= tol;
}

inline void check_profile(const Game& g, const MixedProfile& p) {
  if (p.x.size() != g.rows() || p.y.size() != g.cols())
    throw std::invalid_argument("profile dimensions do not match the game");
  if (!is_distribution(p.x) || !is_distribution(p.y))
    throw std::invalid_argument("profile is not a pair of probability vectors");
}

struct ApproxResult {
  MixedProfile profile;
  double eps = 0.0;
  EpsKind kind = EpsKind::ApproxNE;
  std::string algorithm;
  double solve_time = 0.0;  // seconds
  std::optional<long> iterations;
  // Per-iteration LP row counts (descent methods only).
  std::vector<int> lp_rows;
  // Objective value after each iteration (descent methods only).
  std::vector<double> objective_trace;
};

// Per-matrix min-max scaling to [0,1]. A constant matrix becomes all zeros.
inline Matrix normalize_matrix(const Matrix& a) {
  const double lo = a.minCoeff();
  const double hi = a.maxCoeff();
  if (hi == lo) return Matrix::Zero(a.rows(), a.cols());
  Matrix out = (a.array() - lo) / (hi - lo);
  return out;
}

// Idempotent: the scaled minimum is exactly 0 and the maximum exactly 1.
inline Game normalize(const Game& g) {
  return Game(normalize_matrix(g.row_payoffs()), normalize_matrix(g.col_payoffs()),
              g.name());
}

struct Regrets {
  double row = 0.0;
  double col = 0.0;
  double max() const { return std::max(row, col); }
};

inline Regrets regrets(const Game& g, const MixedProfile& p) {
  const Vector ry = g.row_payoffs() * p.y;
  const Vector xc = g.col_payoffs().transpose() * p.x;
  Regrets r;
  r.row = std::max(0.0, ry.maxCoeff() - p.x.dot(ry));
  r.col = std::max(0.0, xc.maxCoeff() - xc.dot(p.y));
  return r;
}

inline double well_supported_regret(const Vector& payoffs, const Vector& strategy) {
  const double best = payoffs.maxCoeff();
  double worst = 0.0;
  for (Index i = 0; i < strategy.size(); ++i)
    if (strategy(i) > 0.0) worst = std::max(worst, best - payoffs(i));
  return worst;
}

inline double epsilon(const Game& g, const MixedProfile& p, EpsKind kind) {
  check_profile(g, p);
  if (kind == EpsKind::ApproxNE) return std::clamp(regrets(g, p).max(), 0.0, 1.0);
  const Vector ry = g.row_payoffs() * p.y;
  const Vector xc = g.col_payoffs().transpose() * p.x;
  return std::clamp(
      std::max(well_supported_regret(ry, p.x), well_supported_regret(xc, p.y)),
      0.0, 1.0);
}

// Lowest-index maximizer of the responding player's payoff against a pure
// strategy of the opponent.
inline Index pure_best_response(const Game& g, Index against, Side responder) {
  Index best = 0;
  if (responder == Side::Column) {
    if (against < 0 || against >= g.rows())
      throw std::out_of_range("pure_best_response: row index out of range");
    const auto row = g.col_payoffs().row(against);
    for (Index j = 1; j < g.cols(); ++j)
      if (row(j) > row(best)) best = j;
  } else {
    if (against < 0 || against >= g.cols())
      throw std::out_of_range("pure_best_response: column index out of range");
    const auto col = g.row_payoffs().col(against);
    for (Index i = 1; i < g.rows(); ++i)
      if (col(i) > col(best)) best = i;
  }
  return best;
}

// Lowest-index maximizer of a payoff vector.
inline Index argmax_first(const Vector& v) {
  Index best = 0;
  for (Index i = 1; i < v.size(); ++i)
    if (v(i) > v(best)) best = i;
  return best;
}

// Pure strategies of `side` that are strictly dominated by another pure
// strategy of the same player.
inline std::vector<Index> dominated_strategies(const Game& g, Side side) {
  const Matrix a = side == Side::Row ? g.row_payoffs()
                                     : Matrix(g.col_payoffs().transpose());
  std::vector<Index> out;
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index k = 0; k < a.rows(); ++k) {
      if (k != i && (a.row(k).array() > a.row(i).array()).all()) {
        out.push_back(i);
        break;
      }
    }
  }
  return out;
}

// Cells (i, j) where both players best-respond.
inline std::vector<std::pair<Index, Index>> pure_equilibria(const Game& g) {
  const Vector col_max = g.row_payoffs().colwise().maxCoeff().transpose();
  const Vector row_max = g.col_payoffs().rowwise().maxCoeff();
  std::vector<std::pair<Index, Index>> out;
  for (Index i = 0; i < g.rows(); ++i)
    for (Index j = 0; j < g.cols(); ++j)
      if (g.row_payoffs()(i, j) >= col_max(j) && g.col_payoffs()(i, j) >= row_max(i))
        out.emplace_back(i, j);
  return out;
}

inline std::vector<Index> support_of(const Vector& v, double tol = 0.0) {
  std::vector<Index> s;
  for (Index i = 0; i < v.size(); ++i)
    if (v(i) > tol) s.push_back(i);
  return s;
}

}  // namespace bimatrix

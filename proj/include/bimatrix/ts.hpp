#pragma once

// Descent on f(x, y) = max(fR, fC), the larger of the two regrets, towards a
// delta-stationary point, followed by the stationary-point construction of a
// second profile when the stationary value is above the 0.3393 + delta bound.

#include "bimatrix/approx.hpp"
#include "bimatrix/deadline.hpp"
#include "bimatrix/game.hpp"
#include "bimatrix/lp.hpp"
#include "bimatrix/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace bimatrix::approx {

inline constexpr double kTsBound = 0.3393;

enum class TsInit { Uniform, Bbm, Random, Pure };
enum class TsStep { LineSearch, Fixed };

struct TsOptions {
  double delta = 0.001;
  TsInit init = TsInit::Uniform;
  std::uint64_t init_seed = 0;       // TsInit::Random
  Index init_row = 0, init_col = 0;  // TsInit::Pure
  TsStep step = TsStep::LineSearch;
  // Stop once the best direction decreases f by less than this; negative
  // means delta / 100.
  double stop_threshold = -1.0;
  // Slack of the approximate best-response sets; negative means delta.
  double set_tolerance = -1.0;
  long max_iterations = 10000;
  Deadline deadline;
};

// Parses "uniform", "bbm", "random:<seed>" or "pure:<i>,<j>" (1-based).
inline void parse_ts_init(const std::string& spec, TsOptions& opt) {
  if (spec == "uniform") {
    opt.init = TsInit::Uniform;
  } else if (spec == "bbm") {
    opt.init = TsInit::Bbm;
  } else if (spec.rfind("random:", 0) == 0) {
    opt.init = TsInit::Random;
    opt.init_seed = std::stoull(spec.substr(7));
  } else if (spec.rfind("pure:", 0) == 0) {
    const auto comma = spec.find(',', 5);
    if (comma == std::string::npos) throw std::invalid_argument("pure init needs 'pure:i,j'");
    opt.init = TsInit::Pure;
    opt.init_row = std::stol(spec.substr(5, comma - 5)) - 1;
    opt.init_col = std::stol(spec.substr(comma + 1)) - 1;
  } else {
    throw std::invalid_argument("unknown TS initialization: " + spec);
  }
}

struct TsTrace {
  long iterations = 0;
  bool stationary = false;       // false: iteration cap reached
  bool second_point_used = false;
  double stationary_value = 0.0;
  std::vector<int> lp_rows;
  std::vector<double> objective;
};

namespace detail {

// f along the segment from p to q, f(t) = max over the two regrets, each a
// max of linear terms minus a quadratic bilinear term.
class Segment {
 public:
  Segment(const Game& g, const MixedProfile& p, const MixedProfile& q) {
    const Matrix& r = g.row_payoffs();
    const Matrix& c = g.col_payoffs();
    ry0_ = r * p.y;
    ry1_ = r * q.y;
    cx0_ = c.transpose() * p.x;
    cx1_ = c.transpose() * q.x;
    // x(t)^T R y(t) = a + b t + c t^2 with x(t) = p.x + t dx, y(t) likewise.
    const Vector dx = q.x - p.x, dy = q.y - p.y;
    const Vector rdy = ry1_ - ry0_;
    ra_ = p.x.dot(ry0_);
    rb_ = dx.dot(ry0_) + p.x.dot(rdy);
    rc_ = dx.dot(rdy);
    const Vector cdx = cx1_ - cx0_;
    ca_ = cx0_.dot(p.y);
    cb_ = cdx.dot(p.y) + cx0_.dot(dy);
    cc_ = cdx.dot(dy);
  }

  double operator()(double t) const {
    const double best_r = ((1.0 - t) * ry0_ + t * ry1_).maxCoeff();
    const double best_c = ((1.0 - t) * cx0_ + t * cx1_).maxCoeff();
    const double fr = best_r - (ra_ + t * (rb_ + t * rc_));
    const double fc = best_c - (ca_ + t * (cb_ + t * cc_));
    return std::max(fr, fc);
  }

 private:
  Vector ry0_, ry1_, cx0_, cx1_;
  double ra_, rb_, rc_, ca_, cb_, cc_;
};

// Minimizes the segment function over [0,1]: 32 uniform samples bracket the
// best region, golden-section search refines it to 1e-6.
inline std::pair<double, double> line_search(const Segment& f) {
  constexpr int samples = 32;
  double best_t = 0.0, best_v = f(0.0);
  int best_k = 0;
  for (int k = 1; k <= samples; ++k) {
    const double t = static_cast<double>(k) / samples;
    const double v = f(t);
    if (v < best_v) {
      best_v = v;
      best_t = t;
      best_k = k;
    }
  }
  double lo = std::max(0, best_k - 1) / static_cast<double>(samples);
  double hi = std::min(samples, best_k + 1) / static_cast<double>(samples);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
  double fa = f(a), fb = f(b);
  while (hi - lo > 1e-6) {
    if (fa <= fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - phi * (hi - lo);
      fa = f(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + phi * (hi - lo);
      fb = f(b);
    }
  }
  for (double t : {a, b}) {
    const double v = f(t);
    if (v < best_v) {
      best_v = v;
      best_t = t;
    }
  }
  return {best_t, best_v};
}

struct Direction {
  MixedProfile target;  // (x', y')
  double value = 0.0;   // optimal LP value; the derivative is value - f
  Vector row_dual;      // weights on the approximate best rows (length m)
  Vector col_dual;      // weights on the approximate best columns (length n)
  int rows = 0;
};

// Steepest-descent LP over target profiles (x', y'):
//   min g  s.t.  (R_i - x^T R) y' - (R y)^T x' + x^T R y <= g   for i in E_R
//                (C_j^T - y^T C^T) x' - (x^T C) y' + x^T C y <= g   for j in E_C
//                x', y' distributions.
// Each left side is the regret value reached to first order in that
// direction (the value plus the one-sided directional derivative).
inline Direction direction_lp(const Game& g, const MixedProfile& p, const std::vector<Index>& er,
                              const std::vector<Index>& ec, const Deadline& deadline) {
  const Matrix& r = g.row_payoffs();
  const Matrix& c = g.col_payoffs();
  const Index m = g.rows(), n = g.cols();
  const Vector ry = r * p.y;
  const Vector xr = r.transpose() * p.x;
  const Vector cy = c * p.y;
  const Vector xc = c.transpose() * p.x;
  const double vr = p.x.dot(ry), vc = p.x.dot(cy);

  lp::LinearProgram<double> prog;
  prog.sense = lp::Sense::Minimize;
  for (Index k = 0; k < m + n; ++k) prog.add_variable(0.0);
  // Every left side lies in [-3, 3], so g <= 3 loses nothing; the finite
  // bound turns each regret row into a <= row with a positive right-hand
  // side once g is rewritten as 3 minus a slack.
  prog.add_variable(1.0, std::nullopt, 3.0);
  const auto width = static_cast<std::size_t>(m + n + 1);
  for (Index i : er) {
    std::vector<double> row(width, 0.0);
    for (Index k = 0; k < m; ++k) row[static_cast<std::size_t>(k)] = -ry(k);
    for (Index j = 0; j < n; ++j) row[static_cast<std::size_t>(m + j)] = r(i, j) - xr(j);
    row[width - 1] = -1.0;
    prog.add_constraint(std::move(row), lp::Relation::LessEqual, -vr);
  }
  for (Index j : ec) {
    std::vector<double> row(width, 0.0);
    for (Index k = 0; k < m; ++k) row[static_cast<std::size_t>(k)] = c(k, j) - cy(k);
    for (Index l = 0; l < n; ++l) row[static_cast<std::size_t>(m + l)] = -xc(l);
    row[width - 1] = -1.0;
    prog.add_constraint(std::move(row), lp::Relation::LessEqual, -vc);
  }
  {
    std::vector<double> row(width, 0.0);
    for (Index k = 0; k < m; ++k) row[static_cast<std::size_t>(k)] = 1.0;
    prog.add_constraint(std::move(row), lp::Relation::Equal, 1.0);
  }
  {
    std::vector<double> row(width, 0.0);
    for (Index l = 0; l < n; ++l) row[static_cast<std::size_t>(m + l)] = 1.0;
    prog.add_constraint(std::move(row), lp::Relation::Equal, 1.0);
  }
  const auto sol = lp::solve(prog, deadline);
  if (sol.status != lp::Status::Optimal)
    throw lp::LpError(std::string("descent LP ended ") + lp::to_string(sol.status));

  Direction d;
  d.rows = static_cast<int>(prog.num_constraints());
  d.value = sol.objective;
  d.target.x = Vector(m);
  d.target.y = Vector(n);
  for (Index k = 0; k < m; ++k) d.target.x(k) = std::max(0.0, sol.x[static_cast<std::size_t>(k)]);
  for (Index l = 0; l < n; ++l) d.target.y(l) = std::max(0.0, sol.x[static_cast<std::size_t>(m + l)]);
  d.target.x /= d.target.x.sum();
  d.target.y /= d.target.y.sum();
  // Multipliers of the <= rows are nonpositive in a minimization.
  d.row_dual = Vector::Zero(m);
  d.col_dual = Vector::Zero(n);
  std::size_t k = 0;
  for (Index i : er) d.row_dual(i) = std::max(0.0, -sol.duals[k++]);
  for (Index j : ec) d.col_dual(j) = std::max(0.0, -sol.duals[k++]);
  return d;
}

inline std::vector<Index> near_best(const Vector& payoffs, double tol) {
  const double best = payoffs.maxCoeff();
  std::vector<Index> out;
  for (Index i = 0; i < payoffs.size(); ++i)
    if (payoffs(i) >= best - tol) out.push_back(i);
  return out;
}

// The second profile built from a stationary point and the dual solution
// (rho, w, z) of its descent LP.
inline MixedProfile second_point(const Game& g, const MixedProfile& p, const Direction& d,
                                 const std::vector<Index>& er, const std::vector<Index>& ec) {
  const double rho = d.row_dual.sum();
  const double rest = d.col_dual.sum();
  const Vector w = rho > 0.0 ? Vector(d.row_dual / rho) : p.x;
  const Vector z = rest > 0.0 ? Vector(d.col_dual / rest) : p.y;
  const Vector wr = g.row_payoffs().transpose() * (w - p.x);
  const Vector cz = g.col_payoffs() * (z - p.y);
  double lambda = std::numeric_limits<double>::infinity();
  for (Index j : ec) lambda = std::min(lambda, wr(j));
  double mu = std::numeric_limits<double>::infinity();
  for (Index i : er) mu = std::min(mu, cz(i));
  if (!std::isfinite(lambda)) lambda = 0.0;
  if (!std::isfinite(mu)) mu = 0.0;
  MixedProfile out;
  if (lambda >= mu) {
    const double s = lambda - mu;
    out.x = (w + s * p.x) / (1.0 + s);
    out.y = z;
  } else {
    const double s = mu - lambda;
    out.x = w;
    out.y = (z + s * p.y) / (1.0 + s);
  }
  return out;
}

inline MixedProfile ts_start(const Game& g, const TsOptions& opt) {
  const Index m = g.rows(), n = g.cols();
  switch (opt.init) {
    case TsInit::Uniform: return MixedProfile::uniform(m, n);
    case TsInit::Bbm: return bbm1(g, opt.deadline).profile;
    case TsInit::Pure:
      if (opt.init_row < 0 || opt.init_row >= m || opt.init_col < 0 || opt.init_col >= n)
        throw std::out_of_range("ts: pure start out of range");
      return MixedProfile::pure(m, n, opt.init_row, opt.init_col);
    case TsInit::Random: {
      Rng rng(opt.init_seed);
      MixedProfile p{Vector(m), Vector(n)};
      // Exponential weights give a uniform point of the simplex.
      for (Index i = 0; i < m; ++i) p.x(i) = -std::log(rng.uniform_open_closed());
      for (Index j = 0; j < n; ++j) p.y(j) = -std::log(rng.uniform_open_closed());
      p.x /= p.x.sum();
      p.y /= p.y.sum();
      return p;
    }
  }
  return MixedProfile::uniform(m, n);
}

}  // namespace detail

inline ApproxResult ts(const Game& g, const TsOptions& opt, TsTrace* trace_out = nullptr) {
  if (!(opt.delta > 0.0)) throw std::invalid_argument("ts: delta must be positive");
  Stopwatch sw;
  const double stop = opt.stop_threshold >= 0.0 ? opt.stop_threshold : opt.delta / 100.0;
  const double set_tol = opt.set_tolerance >= 0.0 ? opt.set_tolerance : opt.delta;
  const double fixed_step = opt.delta / (opt.delta + 2.0);
  TsTrace trace;

  MixedProfile p = detail::ts_start(g, opt);
  double f = regrets(g, p).max();
  std::vector<Index> er, ec;
  detail::Direction dir;
  for (;;) {
    opt.deadline.check();
    er = detail::near_best(g.row_payoffs() * p.y, set_tol);
    ec = detail::near_best(g.col_payoffs().transpose() * p.x, set_tol);
    dir = detail::direction_lp(g, p, er, ec, opt.deadline);
    trace.lp_rows.push_back(dir.rows);
    if (dir.value - f > -stop) {
      trace.stationary = true;
      break;
    }
    if (trace.iterations >= opt.max_iterations) break;
    const detail::Segment seg(g, p, dir.target);
    double t, v;
    if (opt.step == TsStep::LineSearch) {
      std::tie(t, v) = detail::line_search(seg);
    } else {
      t = fixed_step;
      v = seg(t);
    }
    if (!(v < f)) {
      // No actual progress along the LP direction: treat as stationary.
      trace.stationary = true;
      break;
    }
    p.x = ((1.0 - t) * p.x + t * dir.target.x).eval();
    p.y = ((1.0 - t) * p.y + t * dir.target.y).eval();
    f = regrets(g, p).max();
    ++trace.iterations;
    trace.objective.push_back(f);
  }
  trace.stationary_value = f;

  MixedProfile out = p;
  if (f > kTsBound + opt.delta) {
    MixedProfile second = detail::second_point(g, p, dir, er, ec);
    if (regrets(g, second).max() < f) {
      out = std::move(second);
      trace.second_point_used = true;
    }
  }
  ApproxResult res = detail::finish(g, std::move(out), EpsKind::ApproxNE, "ts", sw);
  res.iterations = trace.iterations;
  res.lp_rows = trace.lp_rows;
  res.objective_trace = trace.objective;
  if (trace_out) *trace_out = std::move(trace);
  return res;
}

inline ApproxResult ts(const Game& g, double delta, const Deadline& deadline = Deadline::never()) {
  TsOptions opt;
  opt.delta = delta;
  opt.deadline = deadline;
  return ts(g, opt);
}

}  // namespace bimatrix::approx

#pragma once

// Genetic search for games on which a solver (or the best of a portfolio of
// solvers) returns a poor approximation.

#include "bimatrix/approx.hpp"
#include "bimatrix/deadline.hpp"
#include "bimatrix/game.hpp"
#include "bimatrix/lp.hpp"
#include "bimatrix/random.hpp"
#include "bimatrix/rational.hpp"
#include "bimatrix/registry.hpp"
#include "bimatrix/ts.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace bimatrix::evolve {

inline constexpr long kMaxEntry = 99999;

struct Genome {
  std::vector<long> row;  // m*n, row-major
  std::vector<long> col;
  int m = 5;
  int n = 5;

  Genome() = default;
  Genome(int rows, int cols) : row(static_cast<std::size_t>(rows * cols)), col(row.size()), m(rows), n(cols) {}

  long& r(int i, int j) { return row[static_cast<std::size_t>(i * n + j)]; }
  long& c(int i, int j) { return col[static_cast<std::size_t>(i * n + j)]; }

  bool valid() const {
    if (m < 1 || n < 1 || row.size() != static_cast<std::size_t>(m * n) || col.size() != row.size()) return false;
    auto in_bounds = [](long v) { return v >= 0 && v <= kMaxEntry; };
    return std::all_of(row.begin(), row.end(), in_bounds) && std::all_of(col.begin(), col.end(), in_bounds);
  }
  bool operator==(const Genome&) const = default;
};

inline Genome random_genome(int m, int n, Rng& rng) {
  Genome g(m, n);
  for (auto& v : g.row) v = static_cast<long>(rng.below(kMaxEntry + 1));
  for (auto& v : g.col) v = static_cast<long>(rng.below(kMaxEntry + 1));
  return g;
}

// The raw integer game, as it would be written to a game file.
inline Game raw_game(const Genome& g) {
  Matrix r(g.m, g.n), c(g.m, g.n);
  for (int i = 0; i < g.m; ++i)
    for (int j = 0; j < g.n; ++j) {
      r(i, j) = static_cast<double>(g.row[static_cast<std::size_t>(i * g.n + j)]);
      c(i, j) = static_cast<double>(g.col[static_cast<std::size_t>(i * g.n + j)]);
    }
  return Game(std::move(r), std::move(c), "evolved");
}

inline RationalGame exact_normalized(const Genome& g) {
  RationalMatrix r(static_cast<std::size_t>(g.m), static_cast<std::size_t>(g.n));
  RationalMatrix c(r.rows(), r.cols());
  for (int i = 0; i < g.m; ++i)
    for (int j = 0; j < g.n; ++j) {
      r(i, j) = Rational(g.row[static_cast<std::size_t>(i * g.n + j)]);
      c(i, j) = Rational(g.col[static_cast<std::size_t>(i * g.n + j)]);
    }
  return normalize(RationalGame{std::move(r), std::move(c)});
}

inline Genome genome_from_game(const Game& game) {
  Genome g(static_cast<int>(game.rows()), static_cast<int>(game.cols()));
  for (int i = 0; i < g.m; ++i)
    for (int j = 0; j < g.n; ++j) {
      const double a = game.row_payoffs()(i, j), b = game.col_payoffs()(i, j);
      if (a != std::floor(a) || b != std::floor(b) || a < 0 || b < 0 || a > kMaxEntry || b > kMaxEntry)
        throw std::invalid_argument("genome: payoffs must be integers in [0, 99999]");
      g.r(i, j) = static_cast<long>(a);
      g.c(i, j) = static_cast<long>(b);
    }
  return g;
}

enum class Mode { Single, Min };

struct FitnessSpec {
  std::vector<std::string> targets{"ts001"};  // subset of ts001, pure, bbm2, ksplus
  Mode mode = Mode::Single;
  bool penalize_domination = false;
  bool mixed_domination = false;
  double penalty_weight = 0.1;
  double target_timeout = 10.0;  // seconds per target run

  void validate() const {
    if (targets.empty()) throw std::invalid_argument("fitness: no targets");
    for (const auto& t : targets)
      if (t != "ts001" && t != "pure" && t != "bbm2" && t != "ksplus")
        throw std::invalid_argument("fitness: unsupported target '" + t + "'");
    if (mode == Mode::Single && targets.size() != 1)
      throw std::invalid_argument("fitness: single mode takes exactly one target");
    if (mode == Mode::Min && targets.size() < 2)
      throw std::invalid_argument("fitness: min mode needs at least two targets");
    if (!(penalty_weight >= 0.0)) throw std::invalid_argument("fitness: penalty weight must be >= 0");
  }
};

// Worst value a target can return, used when it times out.
inline double guarantee_ceiling(const std::string& target) {
  if (target == "ts001") return approx::kTsBound + 0.001;
  if (target == "bbm2") return approx::kBbm2Bound;
  if (target == "ksplus") return approx::kKsPlusBound;
  return 1.0;
}

// Strategy `k` of the row player (or column player, on the transposed game)
// strictly dominated by a mixture of the others: max t subject to
// sum_l s_l A_l - A_k >= t, s in the simplex, is positive.
inline bool mixed_dominated(const Matrix& a, Index k) {
  const Index m = a.rows(), n = a.cols();
  if (m < 2) return false;
  lp::LinearProgram<double> prog;
  prog.sense = lp::Sense::Maximize;
  std::vector<std::size_t> var(static_cast<std::size_t>(m));
  for (Index l = 0; l < m; ++l)
    if (l != k) var[static_cast<std::size_t>(l)] = prog.add_variable(0.0);
  const std::size_t t = prog.add_variable(1.0, std::nullopt);
  for (Index j = 0; j < n; ++j) {
    std::vector<double> coeffs(prog.num_variables(), 0.0);
    for (Index l = 0; l < m; ++l)
      if (l != k) coeffs[var[static_cast<std::size_t>(l)]] = a(l, j);
    coeffs[t] = -1.0;
    prog.add_constraint(std::move(coeffs), lp::Relation::GreaterEqual, a(k, j));
  }
  std::vector<double> simplex(prog.num_variables(), 1.0);
  simplex[t] = 0.0;
  prog.add_constraint(std::move(simplex), lp::Relation::Equal, 1.0);
  const auto sol = lp::solve(prog);
  return sol.status == lp::Status::Optimal && sol.objective > 1e-9;
}

inline int dominated_count(const Game& g, bool mixed) {
  if (!mixed)
    return static_cast<int>(dominated_strategies(g, Side::Row).size() +
                            dominated_strategies(g, Side::Column).size());
  int count = 0;
  const Matrix ct = g.col_payoffs().transpose();
  for (Index i = 0; i < g.rows(); ++i) count += mixed_dominated(g.row_payoffs(), i);
  for (Index j = 0; j < g.cols(); ++j) count += mixed_dominated(ct, j);
  return count;
}

struct Evaluation {
  double fitness = 0.0;
  std::vector<double> target_eps;  // exact epsilon per target, in spec order
  std::vector<bool> timed_out;
  int dominated = 0;
};

// Every target's epsilon is recomputed exactly on the exactly normalized game.
inline Evaluation evaluate(const Genome& genome, const FitnessSpec& spec) {
  if (!genome.valid()) throw std::invalid_argument("fitness: invalid genome");
  const RationalGame exact = exact_normalized(genome);
  const Game g = normalize(raw_game(genome));
  Evaluation ev;
  double combined = std::numeric_limits<double>::infinity();
  for (const auto& target : spec.targets) {
    double eps;
    bool late = false;
    try {
      const auto out = run_algorithm(target, {}, g, exact, Deadline::after(spec.target_timeout));
      eps = verified_epsilon(exact, out).get_d();
    } catch (const TimeoutError&) {
      eps = guarantee_ceiling(target);
      late = true;
    }
    ev.target_eps.push_back(eps);
    ev.timed_out.push_back(late);
    combined = std::min(combined, eps);
  }
  if (spec.penalize_domination) {
    ev.dominated = dominated_count(g, spec.mixed_domination);
    combined -= spec.penalty_weight * ev.dominated;
  }
  ev.fitness = combined;
  return ev;
}

inline double fitness(const Genome& genome, const FitnessSpec& spec) { return evaluate(genome, spec).fitness; }

struct GaParams {
  int rows = 5;
  int cols = 5;
  int population = 100;
  int generations = 200;
  int tournament = 3;
  double crossover_rate = 0.9;
  double mutation_rate = 0.02;
  int elitism = 2;
  int workers = 1;

  void validate() const {
    if (population < 2) throw std::invalid_argument("evolve: population must be >= 2");
    if (generations < 0) throw std::invalid_argument("evolve: generations must be >= 0");
    if (tournament < 1) throw std::invalid_argument("evolve: tournament size must be >= 1");
    if (elitism < 0 || elitism > population) throw std::invalid_argument("evolve: elitism out of range");
    if (crossover_rate < 0 || crossover_rate > 1 || mutation_rate < 0 || mutation_rate > 1)
      throw std::invalid_argument("evolve: rates must lie in [0,1]");
    if (rows < 1 || cols < 1) throw std::invalid_argument("evolve: genome shape must be positive");
  }
};

struct GenerationStats {
  int generation = 0;
  double best = 0.0;
  double mean = 0.0;
  double worst = 0.0;
  Genome best_genome;
};

struct EvolveResult {
  Genome best;
  double best_fitness = 0.0;
  Evaluation verified;  // fresh evaluation of `best`
  std::vector<GenerationStats> history;  // generation 0 is the initial population
};

inline std::vector<Evaluation> evaluate_all(const std::vector<Genome>& pop, const FitnessSpec& spec,
                                            int workers) {
  std::vector<Evaluation> out(pop.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < pop.size();) out[k] = evaluate(pop[k], spec);
  };
  const int w = std::max(1, std::min<int>(workers, static_cast<int>(pop.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < w; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  return out;
}

inline EvolveResult evolve(const FitnessSpec& spec, const GaParams& ga, std::uint64_t seed,
                           const std::function<void(const GenerationStats&)>& on_generation = {}) {
  spec.validate();
  ga.validate();
  Rng rng(seed);
  std::vector<Genome> pop;
  for (int k = 0; k < ga.population; ++k) pop.push_back(random_genome(ga.rows, ga.cols, rng));
  std::vector<Evaluation> evals = evaluate_all(pop, spec, ga.workers);

  EvolveResult res;
  auto ranking = [&] {
    std::vector<std::size_t> idx(pop.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return evals[a].fitness > evals[b].fitness; });
    return idx;
  };
  auto record = [&](int gen, const std::vector<std::size_t>& order) {
    GenerationStats s;
    s.generation = gen;
    s.best = evals[order.front()].fitness;
    s.worst = evals[order.back()].fitness;
    double total = 0.0;
    for (const auto& e : evals) total += e.fitness;
    s.mean = total / static_cast<double>(evals.size());
    s.best_genome = pop[order.front()];
    if (on_generation) on_generation(s);
    res.history.push_back(std::move(s));
  };
  auto select = [&]() -> const Genome& {
    std::size_t best = rng.below(pop.size());
    for (int k = 1; k < ga.tournament; ++k) {
      const std::size_t c = rng.below(pop.size());
      if (evals[c].fitness > evals[best].fitness) best = c;
    }
    return pop[best];
  };

  std::vector<std::size_t> order = ranking();
  record(0, order);
  for (int gen = 1; gen <= ga.generations; ++gen) {
    std::vector<Genome> next;
    std::vector<Evaluation> next_evals;
    for (int e = 0; e < ga.elitism; ++e) {
      next.push_back(pop[order[static_cast<std::size_t>(e)]]);
      next_evals.push_back(evals[order[static_cast<std::size_t>(e)]]);
    }
    std::vector<Genome> children;
    while (static_cast<int>(next.size() + children.size()) < ga.population) {
      const Genome& a = select();
      const Genome& b = select();
      Genome child = a;
      if (rng.uniform() < ga.crossover_rate) {
        for (std::size_t k = 0; k < child.row.size(); ++k) {
          if (rng.coin()) child.row[k] = b.row[k];
          if (rng.coin()) child.col[k] = b.col[k];
        }
      }
      for (std::size_t k = 0; k < child.row.size(); ++k) {
        if (rng.uniform() < ga.mutation_rate) child.row[k] = static_cast<long>(rng.below(kMaxEntry + 1));
        if (rng.uniform() < ga.mutation_rate) child.col[k] = static_cast<long>(rng.below(kMaxEntry + 1));
      }
      children.push_back(std::move(child));
    }
    auto child_evals = evaluate_all(children, spec, ga.workers);
    for (std::size_t k = 0; k < children.size(); ++k) {
      next.push_back(std::move(children[k]));
      next_evals.push_back(std::move(child_evals[k]));
    }
    pop = std::move(next);
    evals = std::move(next_evals);
    order = ranking();
    record(gen, order);
  }
  res.best = pop[order.front()];
  res.best_fitness = evals[order.front()].fitness;
  res.verified = evaluate(res.best, spec);
  return res;
}

}  // namespace bimatrix::evolve

#pragma once

// Game generators. Every generator is a pure function of its parameters and
// seed, and every emitted game has payoffs in [0,1].

#include "bimatrix/game.hpp"
#include "bimatrix/random.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bimatrix::gen {

enum class GameClass { Random, Covariant, Blotto, Ranking, Sgc, Tournament, UnitVector };

inline GameClass parse_class(const std::string& tag) {
  if (tag == "random") return GameClass::Random;
  if (tag == "covariant") return GameClass::Covariant;
  if (tag == "blotto") return GameClass::Blotto;
  if (tag == "ranking") return GameClass::Ranking;
  if (tag == "sgc") return GameClass::Sgc;
  if (tag == "tournament") return GameClass::Tournament;
  if (tag == "unit") return GameClass::UnitVector;
  throw std::invalid_argument("unknown game class: " + tag);
}

inline const char* tag(GameClass c) {
  switch (c) {
    case GameClass::Random: return "random";
    case GameClass::Covariant: return "covariant";
    case GameClass::Blotto: return "blotto";
    case GameClass::Ranking: return "ranking";
    case GameClass::Sgc: return "sgc";
    case GameClass::Tournament: return "tournament";
    case GameClass::UnitVector: return "unit";
  }
  return "?";
}

struct GenSpec {
  GameClass cls = GameClass::Random;
  // Strategies per player; soldiers T for Blotto when `soldiers` is unset;
  // k for SGC and Tournament.
  int size = 2;
  double rho = 0.0;
  int hills = 3;
  std::optional<int> soldiers;
  int subset = 2;
  std::uint64_t seed = 0;
  bool jitter = false;  // SGC only
};

// Human-readable class label, e.g. "CovariantGame-9" for rho = -0.9 or
// "Blotto-4-7" for four hills and rho = 0.7.
inline std::string label(const GenSpec& s) {
  auto tenths = [](double r) { return std::to_string(static_cast<int>(std::lround(std::abs(r) * 10))); };
  switch (s.cls) {
    case GameClass::Random: return "RandomGame";
    case GameClass::Covariant: return "CovariantGame-" + tenths(s.rho);
    case GameClass::Blotto: return "Blotto-" + std::to_string(s.hills) + "-" + tenths(s.rho);
    case GameClass::Ranking: return "Ranking";
    case GameClass::Sgc: return "SGC";
    case GameClass::Tournament: return "Tournament";
    case GameClass::UnitVector: return "Unit";
  }
  return "?";
}

inline Game gen_random(Index m, Index n, std::uint64_t seed) {
  if (m < 1 || n < 1) throw std::invalid_argument("gen_random: sizes must be >= 1");
  Rng rng(seed);
  Matrix r(m, n), c(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) r(i, j) = rng.uniform();
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) c(i, j) = rng.uniform();
  return Game(std::move(r), std::move(c), "RandomGame");
}

// Each cell's payoff pair is bivariate normal (unit variances, correlation
// rho). With `normalized == false` the raw draws are returned.
inline Game gen_covariant(Index n, double rho, std::uint64_t seed, bool normalized = true) {
  if (n < 1) throw std::invalid_argument("gen_covariant: size must be >= 1");
  if (!(rho >= -1.0 && rho <= 1.0)) throw std::invalid_argument("gen_covariant: rho must lie in [-1,1]");
  Rng rng(seed);
  Matrix r(n, n), c(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const auto [a, b] = rng.bivariate_normal(rho);
      r(i, j) = a;
      c(i, j) = b;
    }
  Game g(std::move(r), std::move(c), "CovariantGame");
  return normalized ? normalize(g) : g;
}

// All ways to place `total` soldiers on `parts` hills, lexicographic order.
inline std::vector<std::vector<int>> compositions(int total, int parts) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(parts), 0);
  auto rec = [&](auto&& self, int idx, int left) -> void {
    if (idx == parts - 1) {
      cur[static_cast<std::size_t>(idx)] = left;
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      cur[static_cast<std::size_t>(idx)] = v;
      self(self, idx + 1, left - v);
    }
  };
  rec(rec, 0, total);
  return out;
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

struct HillValues {
  std::vector<double> row;
  std::vector<double> col;
};

// Per hill, a correlated pair with mean 1 and variance 0.25, truncated below
// at 0.05 by resampling.
inline HillValues blotto_hill_values(int hills, double rho, Rng& rng) {
  HillValues hv;
  for (int h = 0; h < hills; ++h) {
    for (;;) {
      const auto [z1, z2] = rng.bivariate_normal(rho);
      const double a = 1.0 + 0.5 * z1, b = 1.0 + 0.5 * z2;
      if (a >= 0.05 && b >= 0.05) {
        hv.row.push_back(a);
        hv.col.push_back(b);
        break;
      }
    }
  }
  return hv;
}

// Colonel Blotto with private hill values. A hill goes to whoever sends
// strictly more soldiers; ties split the value in expectation.
inline Game gen_blotto(int hills, int soldiers, double rho, std::uint64_t seed,
                       bool normalized = true) {
  if (hills < 1 || soldiers < 1) throw std::invalid_argument("gen_blotto: need hills >= 1 and soldiers >= 1");
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("gen_blotto: rho must lie in (0,1]");
  Rng rng(seed);
  const HillValues hv = blotto_hill_values(hills, rho, rng);
  const auto actions = compositions(soldiers, hills);
  const auto k = static_cast<Index>(actions.size());
  Matrix r(k, k), c(k, k);
  for (Index a = 0; a < k; ++a) {
    for (Index b = 0; b < k; ++b) {
      double pr = 0.0, pc = 0.0;
      for (int h = 0; h < hills; ++h) {
        const int sa = actions[static_cast<std::size_t>(a)][static_cast<std::size_t>(h)];
        const int sb = actions[static_cast<std::size_t>(b)][static_cast<std::size_t>(h)];
        const auto hh = static_cast<std::size_t>(h);
        if (sa > sb) pr += hv.row[hh];
        else if (sb > sa) pc += hv.col[hh];
        else {
          pr += 0.5 * hv.row[hh];
          pc += 0.5 * hv.col[hh];
        }
      }
      r(a, b) = pr;
      c(a, b) = pc;
    }
  }
  Game g(std::move(r), std::move(c), "Blotto");
  return normalized ? normalize(g) : g;
}

struct RankingFunctions {
  // Indexed [player][effort].
  std::vector<double> score[2];
  std::vector<double> cost[2];
};

// Scores and costs are increasing step functions of effort with steps drawn
// uniform on (0,1]. Scores start at 0 for the lowest effort; costs are scaled
// so the largest total cost is 0.9 (below the unit prize).
inline RankingFunctions ranking_functions(int efforts, Rng& rng) {
  RankingFunctions f;
  double max_cost = 0.0;
  for (int p = 0; p < 2; ++p) {
    auto& s = f.score[p];
    auto& c = f.cost[p];
    s.assign(static_cast<std::size_t>(efforts), 0.0);
    c.assign(static_cast<std::size_t>(efforts), 0.0);
    double cs = 0.0;
    for (int e = 0; e < efforts; ++e) {
      if (e > 0) s[static_cast<std::size_t>(e)] = s[static_cast<std::size_t>(e - 1)] + rng.uniform_open_closed();
      cs += rng.uniform_open_closed();
      c[static_cast<std::size_t>(e)] = cs;
    }
    max_cost = std::max(max_cost, cs);
  }
  for (auto& c : f.cost)
    for (auto& v : c) v *= 0.9 / max_cost;
  return f;
}

inline Game ranking_game(const RankingFunctions& f, bool normalized = true) {
  const auto k = static_cast<Index>(f.score[0].size());
  Matrix r(k, k), c(k, k);
  for (Index a = 0; a < k; ++a)
    for (Index b = 0; b < k; ++b) {
      const double sa = f.score[0][static_cast<std::size_t>(a)];
      const double sb = f.score[1][static_cast<std::size_t>(b)];
      const double win_a = sa > sb ? 1.0 : (sa == sb ? 0.5 : 0.0);
      r(a, b) = win_a - f.cost[0][static_cast<std::size_t>(a)];
      c(a, b) = (1.0 - win_a) - f.cost[1][static_cast<std::size_t>(b)];
    }
  Game g(std::move(r), std::move(c), "Ranking");
  return normalized ? normalize(g) : g;
}

inline Game gen_ranking(int efforts, std::uint64_t seed, bool normalized = true) {
  if (efforts < 2) throw std::invalid_argument("gen_ranking: need at least 2 effort levels");
  Rng rng(seed);
  return ranking_game(ranking_functions(efforts, rng), normalized);
}

// (2k-1) x (2k-1) game whose unique equilibrium mixes uniformly over the first
// k strategies of each player. The first k x k block is a generalized
// matching-pennies game (row wants to match, column to mismatch). The k-1
// extra rows pay 1/(2k) against every core column, below the 1/k a core row
// secures; the k-1 extra columns pay 1/4, below the 1/2 a core column secures
// against any row mix. Optional jitter perturbs every entry by at most
// 0.05/k before normalizing, which keeps the support structure.
inline Game gen_sgc(int k, std::uint64_t seed, bool jitter = false) {
  if (k < 2) throw std::invalid_argument("gen_sgc: k must be >= 2");
  const Index n = 2 * k - 1;
  const Index core = k;
  Matrix r = Matrix::Zero(n, n), c = Matrix::Zero(n, n);
  for (Index i = 0; i < core; ++i)
    for (Index j = 0; j < core; ++j) {
      r(i, j) = i == j ? 1.0 : 0.0;
      c(i, j) = i == j ? 0.0 : 1.0;
    }
  for (Index b = core; b < n; ++b)
    for (Index j = 0; j < core; ++j) {
      r(b, j) = 1.0 / (2.0 * k);
      c(b, j) = 0.5 + 0.5 * static_cast<double>(((b - core) + j) % k) / k;
    }
  for (Index i = 0; i < n; ++i)
    for (Index e = core; e < n; ++e) {
      r(i, e) = (i < core && i == e - core) ? 1.0 : 0.0;
      c(i, e) = 0.25;
    }
  if (jitter) {
    Rng rng(seed);
    const double amp = 0.05 / k;
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        r(i, j) += amp * (2.0 * rng.uniform() - 1.0);
        c(i, j) += amp * (2.0 * rng.uniform() - 1.0);
      }
  }
  return normalize(Game(std::move(r), std::move(c), "SGC"));
}

// All s-subsets of {0..k-1}, lexicographic order.
inline std::vector<std::vector<int>> subsets(int k, int s) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(s));
  for (int i = 0; i < s; ++i) cur[static_cast<std::size_t>(i)] = i;
  for (;;) {
    out.push_back(cur);
    int i = s - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == k - s + i) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int t = i + 1; t < s; ++t) cur[static_cast<std::size_t>(t)] = cur[static_cast<std::size_t>(t - 1)] + 1;
  }
  return out;
}

// beats[u][v] == true iff u -> v.
using Tournament = std::vector<std::vector<char>>;

inline Tournament random_tournament(int k, Rng& rng) {
  Tournament t(static_cast<std::size_t>(k), std::vector<char>(static_cast<std::size_t>(k), 0));
  for (int u = 0; u < k; ++u)
    for (int v = u + 1; v < k; ++v) {
      if (rng.coin()) t[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = 1;
      else t[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = 1;
    }
  return t;
}

// Rows are nodes, columns are s-subsets. The row player wins (1) iff its node
// beats every node of the subset; the column player gets the complement.
inline Game tournament_game(const Tournament& t, int s) {
  const int k = static_cast<int>(t.size());
  const auto cols = subsets(k, s);
  Matrix r(k, static_cast<Index>(cols.size()));
  for (int v = 0; v < k; ++v)
    for (std::size_t j = 0; j < cols.size(); ++j) {
      bool all = true;
      for (int u : cols[j]) all = all && t[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)];
      r(v, static_cast<Index>(j)) = all ? 1.0 : 0.0;
    }
  Matrix c = Matrix::Ones(r.rows(), r.cols()) - r;
  return Game(std::move(r), std::move(c), "Tournament");
}

// Tournaments whose game has a pure equilibrium are rejected and resampled.
inline Game gen_tournament(int k, int s, std::uint64_t seed, int max_attempts = 100) {
  if (k < 3) throw std::invalid_argument("gen_tournament: k must be >= 3");
  if (s < 1 || s >= k) throw std::invalid_argument("gen_tournament: subset size must satisfy 1 <= s < k");
  const Rng base(seed);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Rng rng = base.split(static_cast<std::uint64_t>(attempt));
    Game g = tournament_game(random_tournament(k, rng), s);
    if (pure_equilibria(g).empty()) return g;
  }
  throw std::runtime_error("gen_tournament: every sampled tournament had a pure equilibrium");
}

// Column payoffs iid uniform; each row-player column holds a single 1, placed
// uniformly among the rows that would not make the cell a pure equilibrium.
inline Game gen_unit_vector(Index n, std::uint64_t seed, int max_attempts = 100) {
  if (n < 2) throw std::invalid_argument("gen_unit_vector: n must be >= 2");
  const Rng base(seed);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Rng rng = base.split(static_cast<std::uint64_t>(attempt));
    Matrix c(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) c(i, j) = rng.uniform();
    const Vector row_max = c.rowwise().maxCoeff();
    Matrix r = Matrix::Zero(n, n);
    bool ok = true;
    for (Index j = 0; j < n && ok; ++j) {
      std::vector<Index> admissible;
      for (Index i = 0; i < n; ++i)
        if (c(i, j) < row_max(i)) admissible.push_back(i);
      if (admissible.empty()) {
        ok = false;
        break;
      }
      r(admissible[rng.below(admissible.size())], j) = 1.0;
    }
    // Both matrices already lie in [0,1]; keep the uniform draws as they are.
    if (ok) return Game(std::move(r), std::move(c), "Unit");
  }
  throw std::runtime_error("gen_unit_vector: no admissible placement after resampling");
}

inline Game generate(const GenSpec& s) {
  switch (s.cls) {
    case GameClass::Random: return gen_random(s.size, s.size, s.seed);
    case GameClass::Covariant: return gen_covariant(s.size, s.rho, s.seed);
    case GameClass::Blotto: return gen_blotto(s.hills, s.soldiers.value_or(s.size), s.rho, s.seed);
    case GameClass::Ranking: return gen_ranking(s.size, s.seed);
    case GameClass::Sgc: return gen_sgc(s.size, s.seed, s.jitter);
    case GameClass::Tournament: return gen_tournament(s.size, s.subset, s.seed);
    case GameClass::UnitVector: return gen_unit_vector(s.size, s.seed);
  }
  throw std::invalid_argument("generate: unknown class");
}

}  // namespace bimatrix::gen

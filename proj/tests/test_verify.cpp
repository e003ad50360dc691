#include "bimatrix/random.hpp"
#include "bimatrix/verify.hpp"
#include "helpers.hpp"

#include <gtest/gtest.h>

#include <numeric>

using namespace bimatrix;
using namespace testing_games;

namespace {

// Naive fractions over 128-bit integers, independent of GMP.
struct Frac {
  __int128 p = 0, q = 1;
  Frac(__int128 a = 0, __int128 b = 1) : p(a), q(b) {
    if (q < 0) p = -p, q = -q;
    __int128 g = gcd(p < 0 ? -p : p, q);
    if (g > 1) p /= g, q /= g;
  }
  static __int128 gcd(__int128 a, __int128 b) {
    while (b) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    return a ? a : 1;
  }
  Frac operator+(Frac o) const { return {p * o.q + o.p * q, q * o.q}; }
  Frac operator-(Frac o) const { return {p * o.q - o.p * q, q * o.q}; }
  Frac operator*(Frac o) const { return {p * o.p, q * o.q}; }
  bool operator<(Frac o) const { return p * o.q < o.p * q; }
  bool operator==(Frac o) const { return p == o.p && q == o.q; }
};

// Integer determinant by fraction-free elimination.
__int128 det(std::vector<std::vector<__int128>> a) {
  const std::size_t n = a.size();
  __int128 sign = 1, prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && a[piv][k] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != k) {
      std::swap(a[piv], a[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

// Opponent strategy on `opp` making every own strategy in `own` indifferent,
// by Cramer's rule. Returns (numerators for opp..., value numerator, det).
// Payoff matrix a is indexed a[own][opp].
std::optional<std::vector<__int128>> cramer(const std::vector<std::vector<long>>& a,
                                            const std::vector<std::size_t>& own,
                                            const std::vector<std::size_t>& opp) {
  const std::size_t k = opp.size();
  std::vector<std::vector<__int128>> m(k + 1, std::vector<__int128>(k + 1, 0));
  std::vector<__int128> rhs(k + 1, 0);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < k; ++c) m[r][c] = a[own[r]][opp[c]];
    m[r][k] = -1;
  }
  for (std::size_t c = 0; c < k; ++c) m[k][c] = 1;
  rhs[k] = 1;
  const __int128 d = det(m);
  if (d == 0) return std::nullopt;
  std::vector<__int128> out;
  for (std::size_t c = 0; c <= k; ++c) {
    auto mc = m;
    for (std::size_t r = 0; r <= k; ++r) mc[r][c] = rhs[r];
    out.push_back(det(mc));
  }
  out.push_back(d);
  return out;
}

// Whether the opponent strategy from cramer() is a distribution and every
// own strategy outside `own` earns no more than the value.
bool side_ok(const std::vector<std::vector<long>>& a, const std::vector<std::size_t>& opp,
             const std::vector<__int128>& sol, std::size_t own_count) {
  const std::size_t k = opp.size();
  const __int128 d = sol.back();
  const __int128 s = d > 0 ? 1 : -1;
  for (std::size_t c = 0; c < k; ++c)
    if (sol[c] * s < 0) return false;
  for (std::size_t i = 0; i < own_count; ++i) {
    __int128 pay = 0;
    for (std::size_t c = 0; c < k; ++c) pay += a[i][opp[c]] * sol[c];
    if ((pay - sol[k]) * s > 0) return false;
  }
  return true;
}

std::vector<std::vector<std::size_t>> nonempty_subsets(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) s.push_back(i);
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST(ExactEpsilon, MatchingPenniesUniformIsZero) {
  const auto g = RationalGame::from(matching_pennies());
  RationalProfile p{{Rational(1, 2), Rational(1, 2)}, {Rational(1, 2), Rational(1, 2)}};
  EXPECT_EQ(verify::exact_epsilon(g, p, EpsKind::ApproxNE), 0);
  EXPECT_EQ(verify::exact_epsilon(g, p, EpsKind::WellSupported), 0);
}

TEST(ExactEpsilon, MatchingPenniesAgainstNaiveFractions) {
  const auto g = RationalGame::from(matching_pennies());
  RationalProfile p{{Rational(2, 3), Rational(1, 3)}, {Rational(1, 2), Rational(1, 2)}};
  const Rational got = verify::exact_epsilon(g, p, EpsKind::ApproxNE);

  const long r[2][2] = {{1, 0}, {0, 1}}, c[2][2] = {{0, 1}, {1, 0}};
  const Frac x[2] = {Frac(2, 3), Frac(1, 3)}, y[2] = {Frac(1, 2), Frac(1, 2)};
  Frac ry[2], xc[2], xry, xcy;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      ry[i] = ry[i] + Frac(r[i][j]) * y[j];
      xc[j] = xc[j] + x[i] * Frac(c[i][j]);
    }
  for (int i = 0; i < 2; ++i) xry = xry + x[i] * ry[i];
  for (int j = 0; j < 2; ++j) xcy = xcy + xc[j] * y[j];
  const Frac g1 = (ry[0] < ry[1] ? ry[1] : ry[0]) - xry;
  const Frac g2 = (xc[0] < xc[1] ? xc[1] : xc[0]) - xcy;
  const Frac want = g1 < g2 ? g2 : g1;
  EXPECT_EQ(want, Frac(1, 6));
  EXPECT_EQ(got, Rational(static_cast<long>(want.p), static_cast<long>(want.q)));
}

TEST(ExactEpsilon, Errors) {
  const auto g = RationalGame::from(matching_pennies());
  RationalProfile short_p{{Rational(1)}, {Rational(1, 2), Rational(1, 2)}};
  EXPECT_THROW(verify::exact_epsilon(g, short_p, EpsKind::ApproxNE), std::invalid_argument);
  RationalProfile bad{{Rational(1, 2), Rational(1, 3)}, {Rational(1, 2), Rational(1, 2)}};
  EXPECT_THROW(verify::exact_epsilon(g, bad, EpsKind::ApproxNE), std::invalid_argument);
  RationalProfile neg{{Rational(3, 2), Rational(-1, 2)}, {Rational(1, 2), Rational(1, 2)}};
  EXPECT_THROW(verify::exact_epsilon(g, neg, EpsKind::ApproxNE), std::invalid_argument);
}

TEST(ExactEpsilon, AgreesWithFloatOnBoundedDenominators) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const std::size_t m = 5, n = 4;
    RationalGame eg{RationalMatrix(m, n), RationalMatrix(m, n)};
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        eg.row(i, j) = Rational(static_cast<long>(rng.below(1000000)), 1000000);
        eg.col(i, j) = Rational(static_cast<long>(rng.below(999983)), 999983);
        eg.row(i, j).canonicalize();
        eg.col(i, j).canonicalize();
      }
    const Game g = eg.to_double();
    RationalProfile p;
    long total = 0;
    std::vector<long> w(m);
    for (auto& v : w) total += (v = static_cast<long>(rng.below(1000)) + 1);
    for (auto v : w) p.x.push_back(Rational(v, total));
    for (auto& v : p.x) v.canonicalize();
    total = 0;
    std::vector<long> u(n);
    for (auto& v : u) total += (v = static_cast<long>(rng.below(1000)) + 1);
    for (auto v : u) p.y.push_back(Rational(v, total));
    for (auto& v : p.y) v.canonicalize();
    for (EpsKind kind : {EpsKind::ApproxNE, EpsKind::WellSupported}) {
      const Rational exact = verify::exact_epsilon(eg, p, kind);
      EXPECT_NEAR(exact.get_d(), epsilon(g, to_double(p), kind), 1e-9);
      if (kind == EpsKind::WellSupported) {
        EXPECT_GE(exact, verify::exact_epsilon(eg, p, EpsKind::ApproxNE));
      }
    }
  }
}

TEST(SupportCheck, SmallGames) {
  const auto mp = RationalGame::from(matching_pennies());
  const auto full = verify::check_support_equilibrium(mp, {{0, 1}, {0, 1}});
  ASSERT_TRUE(full);
  EXPECT_EQ(full->x[0], Rational(1, 2));
  EXPECT_EQ(full->y[1], Rational(1, 2));
  EXPECT_FALSE(verify::check_support_equilibrium(mp, {{0}, {0}}));

  const auto co = RationalGame::from(coordination());
  const auto pure = verify::check_support_equilibrium(co, {{0}, {0}});
  ASSERT_TRUE(pure);
  EXPECT_EQ(pure->x[0], 1);
  EXPECT_EQ(pure->y[0], 1);
  EXPECT_EQ(pure->x[1], 0);
}

TEST(SupportCheck, RejectsMalformedSupports) {
  const auto mp = RationalGame::from(matching_pennies());
  EXPECT_THROW(verify::check_support_equilibrium(mp, {{}, {0}}), std::invalid_argument);
  EXPECT_THROW(verify::check_support_equilibrium(mp, {{2}, {0}}), std::invalid_argument);
  EXPECT_THROW(verify::check_support_equilibrium(mp, {{1, 0}, {0}}), std::invalid_argument);
}

TEST(SupportCheck, DegenerateUnequalSupports) {
  // Column 2 duplicates column 1 for the row player: the equilibrium (row 1,
  // column 1) extends to a continuum mixing columns 1 and 2.
  const Game g = from_rows({{1, 1}, {0, 0}}, {{1, 1}, {0, 0}});
  const auto p = verify::check_support_equilibrium(RationalGame::from(g), {{0}, {0, 1}});
  ASSERT_TRUE(p);
  EXPECT_EQ(verify::exact_epsilon(RationalGame::from(g), *p, EpsKind::ApproxNE), 0);
}

// Every support pair of random 4x4 integer games: the checker accepts
// exactly the pairs an independent Cramer's-rule oracle accepts.
TEST(SupportCheck, ExhaustiveFourByFourOracle) {
  const std::size_t m = 4, n = 4;
  const auto subsets = nonempty_subsets(4);
  int accepted_total = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed * 7 + 3);
    std::vector<std::vector<long>> r(m, std::vector<long>(n)), c(m, std::vector<long>(n)), ct(n, std::vector<long>(m));
    RationalGame eg{RationalMatrix(m, n), RationalMatrix(m, n)};
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        r[i][j] = static_cast<long>(rng.below(10000));
        c[i][j] = static_cast<long>(rng.below(10000));
        ct[j][i] = c[i][j];
        eg.row(i, j) = r[i][j];
        eg.col(i, j) = c[i][j];
      }
    for (const auto& s : subsets)
      for (const auto& t : subsets) {
        bool oracle = false;
        if (s.size() == t.size()) {
          const auto ysol = cramer(r, s, t);
          const auto xsol = cramer(ct, t, s);
          oracle = ysol && xsol && side_ok(r, t, *ysol, m) && side_ok(ct, s, *xsol, n);
        }
        const auto got = verify::check_support_equilibrium(eg, {s, t});
        EXPECT_EQ(got.has_value(), oracle) << "seed " << seed;
        if (got) {
          ++accepted_total;
          EXPECT_EQ(verify::exact_epsilon(eg, *got, EpsKind::ApproxNE), 0);
        }
      }
  }
  EXPECT_GE(accepted_total, 30);  // every game has at least one equilibrium
}

#include "bimatrix/game.hpp"
#include "bimatrix/gen.hpp"
#include "bimatrix/io.hpp"
#include "bimatrix/random.hpp"
#include "helpers.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace bimatrix;
using namespace testing_games;

TEST(Game, RejectsShapeMismatchAndNonFinite) {
  EXPECT_THROW(Game(Matrix::Zero(2, 2), Matrix::Zero(2, 3)), std::invalid_argument);
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(Game(bad, Matrix::Zero(2, 2)), std::invalid_argument);
  EXPECT_THROW(Game(Matrix::Zero(0, 0), Matrix::Zero(0, 0)), std::invalid_argument);
}

TEST(Normalize, PerMatrixMinMax) {
  const Game g = from_rows({{2, 4}, {6, 10}}, {{-1, -1}, {3, 1}});
  const Game n = normalize(g);
  EXPECT_DOUBLE_EQ(n.row_payoffs()(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(n.row_payoffs()(1, 1), 1.0);
  EXPECT_DOUBLE_EQ(n.row_payoffs()(0, 1), 0.25);
  EXPECT_DOUBLE_EQ(n.col_payoffs()(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(n.col_payoffs()(1, 1), 0.5);
  EXPECT_TRUE(n.is_normalized());
}

TEST(Normalize, ConstantBecomesZero) {
  const Game n = normalize(Game(Matrix::Constant(3, 2, 7.0), Matrix::Constant(3, 2, -2.0)));
  EXPECT_EQ(n.row_payoffs().maxCoeff(), 0.0);
  EXPECT_EQ(n.col_payoffs().minCoeff(), 0.0);
}

TEST(Normalize, IdempotentAndPreservesBestResponses) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    Matrix r(4, 5), c(4, 5);
    for (Index i = 0; i < 4; ++i)
      for (Index j = 0; j < 5; ++j) {
        r(i, j) = 100 * rng.uniform() - 30;
        c(i, j) = 7 * rng.uniform() + 2;
      }
    const Game g(r, c);
    const Game n = normalize(g);
    const Game nn = normalize(n);
    EXPECT_EQ(n.row_payoffs(), nn.row_payoffs());
    EXPECT_EQ(n.col_payoffs(), nn.col_payoffs());
    for (Index j = 0; j < 5; ++j)
      EXPECT_EQ(pure_best_response(g, j, Side::Row), pure_best_response(n, j, Side::Row));
    for (Index i = 0; i < 4; ++i)
      EXPECT_EQ(pure_best_response(g, i, Side::Column), pure_best_response(n, i, Side::Column));
  }
}

TEST(Regrets, MatchingPenniesPureCell) {
  const Game g = matching_pennies();
  const Regrets r = regrets(g, MixedProfile::pure(2, 2, 0, 0));
  EXPECT_DOUBLE_EQ(r.row, 0.0);
  EXPECT_DOUBLE_EQ(r.col, 1.0);
}

TEST(Regrets, RpsUniformIsEquilibrium) {
  const Regrets r = regrets(rps(), MixedProfile::uniform(3, 3));
  EXPECT_NEAR(r.row, 0.0, 1e-15);
  EXPECT_NEAR(r.col, 0.0, 1e-15);
}

TEST(Epsilon, MatchingPenniesDmpProfile) {
  // x = (1/2, 1/2), y = pure column 2: row regret 1/2, column regret 0.
  MixedProfile p{Vector::Constant(2, 0.5), Vector::Unit(2, 1)};
  EXPECT_DOUBLE_EQ(epsilon(matching_pennies(), p, EpsKind::ApproxNE), 0.5);
}

TEST(Epsilon, WellSupportedDominatesApproxAndStaysInUnitInterval) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Game g = gen::gen_random(4, 6, seed);
    Rng rng(seed + 1000);
    Vector x(4), y(6);
    for (Index i = 0; i < 4; ++i) x(i) = rng.uniform() < 0.3 ? 0.0 : rng.uniform();
    for (Index j = 0; j < 6; ++j) y(j) = rng.uniform() < 0.3 ? 0.0 : rng.uniform();
    x(0) += 0.1;
    y(0) += 0.1;
    x /= x.sum();
    y /= y.sum();
    const MixedProfile p{x, y};
    const double ne = epsilon(g, p, EpsKind::ApproxNE), ws = epsilon(g, p, EpsKind::WellSupported);
    EXPECT_GE(ne, 0.0);
    EXPECT_LE(ne, ws + 1e-15);
    EXPECT_LE(ws, 1.0);
  }
}

TEST(Epsilon, RejectsNonStochastic) {
  MixedProfile p{Vector::Constant(2, 0.6), Vector::Constant(2, 0.5)};
  EXPECT_THROW(epsilon(matching_pennies(), p, EpsKind::ApproxNE), std::invalid_argument);
}

TEST(Dominated, Examples) {
  const Game g = from_rows({{1, 1}, {0, 0}}, {{0, 0}, {0, 0}});
  EXPECT_EQ(dominated_strategies(g, Side::Row), (std::vector<Index>{1}));
  EXPECT_TRUE(dominated_strategies(g, Side::Column).empty());  // equal columns: weak only
  EXPECT_TRUE(dominated_strategies(matching_pennies(), Side::Row).empty());
  EXPECT_TRUE(dominated_strategies(matching_pennies(), Side::Column).empty());
  const Game c = load_fixture("fig_c.txt").game;
  EXPECT_TRUE(dominated_strategies(c, Side::Row).empty());
  EXPECT_TRUE(dominated_strategies(c, Side::Column).empty());
}

TEST(PureEquilibria, CoordinationHasTwo) {
  const auto eq = pure_equilibria(coordination());
  ASSERT_EQ(eq.size(), 2u);
  EXPECT_TRUE(pure_equilibria(matching_pennies()).empty());
}

TEST(Io, RoundTripIsBitExact) {
  const Game g = gen::gen_covariant(7, -0.3, 11);
  std::stringstream ss;
  io::write_game(ss, g);
  const auto back = io::read_game(ss);
  EXPECT_EQ(back.game.row_payoffs(), g.row_payoffs());
  EXPECT_EQ(back.game.col_payoffs(), g.col_payoffs());
}

TEST(Io, IntegerGameNormalizesExactly) {
  std::stringstream ss("2 2\n0 10\n5 20\n\n3 3\n3 4\n");
  const auto lg = io::read_game(ss, true);
  EXPECT_EQ(lg.exact.row(1, 0), Rational(1, 4));
  EXPECT_EQ(lg.exact.col(1, 1), Rational(1));
  EXPECT_EQ(lg.exact.col(0, 0), Rational(0));
  EXPECT_DOUBLE_EQ(lg.game.row_payoffs()(1, 0), 0.25);
}

TEST(Io, Errors) {
  std::stringstream truncated("2 2\n1 2\n3\n");
  EXPECT_THROW(io::read_game(truncated), io::ParseError);
  std::stringstream junk("1 1\n1\n\nx\n");
  EXPECT_THROW(io::read_game(junk), io::ParseError);
  std::stringstream header("0 3\n");
  EXPECT_THROW(io::read_game(header), io::ParseError);
}

TEST(Io, ProfileWithFractions) {
  std::stringstream ss("1/3 2/3\n0.5 0.5\n");
  const auto p = io::read_profile(ss);
  EXPECT_EQ(p.x[0], Rational(1, 3));
  EXPECT_EQ(p.y[1], Rational(1, 2));
}

TEST(Rng, DeterministicAndSplittable) {
  Rng a(42), b(42);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(a.next(), b.next());
  Rng c = Rng(42).split(1), d = Rng(42).split(2);
  EXPECT_NE(c.next(), d.next());
}

TEST(Rng, UniformMomentsAndRange) {
  Rng rng(7);
  double sum = 0.0;
  const int n = 1000000;
  for (int k = 0; k < n; ++k) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 0.01);
}

#include "bimatrix/lp.hpp"
#include "bimatrix/random.hpp"

#include <gtest/gtest.h>

using namespace bimatrix;
using namespace bimatrix::lp;

TEST(Simplex, SingleBound) {
  LinearProgram<double> p;
  p.sense = Sense::Maximize;
  p.add_variable(1.0);
  p.add_constraint({1.0}, Relation::LessEqual, 3.0);
  const auto s = solve(p);
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_NEAR(s.x[0], 3.0, 1e-12);
}

TEST(Simplex, SumBound) {
  LinearProgram<double> p;
  p.sense = Sense::Maximize;
  p.add_variable(1.0);
  p.add_variable(1.0);
  p.add_constraint({1.0, 1.0}, Relation::LessEqual, 1.0);
  const auto s = solve(p);
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_NEAR(s.objective, 1.0, 1e-12);
}

TEST(Simplex, InfeasibleAndUnbounded) {
  LinearProgram<double> p;
  p.add_variable(1.0);
  p.add_constraint({1.0}, Relation::LessEqual, -1.0);
  EXPECT_EQ(solve(p).status, Status::Infeasible);

  LinearProgram<double> u;
  u.sense = Sense::Maximize;
  u.add_variable(1.0);
  u.add_variable(0.0);
  u.add_constraint({1.0, -1.0}, Relation::LessEqual, 1.0);
  EXPECT_EQ(solve(u).status, Status::Unbounded);
}

TEST(Simplex, FreeAndBoundedVariables) {
  // min x + y, x free >= -2 via constraint, y in [1, 4], x + y >= 0.5
  LinearProgram<double> p;
  p.add_variable(1.0, std::nullopt);
  p.add_variable(1.0, 1.0, 4.0);
  p.add_constraint({1.0, 0.0}, Relation::GreaterEqual, -2.0);
  p.add_constraint({1.0, 1.0}, Relation::GreaterEqual, 0.5);
  const auto s = solve(p);
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_NEAR(s.objective, 0.5, 1e-9);
  EXPECT_GE(s.x[1], 1.0 - 1e-9);
}

TEST(Simplex, ValidatesShape) {
  LinearProgram<double> p;
  p.add_variable(1.0);
  EXPECT_THROW(p.add_constraint({1.0, 2.0}, Relation::LessEqual, 1.0), std::invalid_argument);
}

// Random feasible bounded LPs: the rational solver gives the exact optimum,
// the float solver agrees, and the dual objective b.y matches the primal.
TEST(Simplex, FloatMatchesExactAndStrongDuality) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(seed);
    const int n = 4, m = 5;
    LinearProgram<double> fp;
    LinearProgram<mpq_class> qp;
    fp.sense = qp.sense = Sense::Maximize;
    for (int j = 0; j < n; ++j) {
      const long c = static_cast<long>(rng.below(20)) - 5;
      fp.add_variable(static_cast<double>(c));
      qp.add_variable(mpq_class(c));
    }
    for (int i = 0; i < m; ++i) {
      std::vector<double> a(n);
      std::vector<mpq_class> aq(n);
      for (int j = 0; j < n; ++j) {
        const long v = static_cast<long>(rng.below(10)) + 1;
        a[static_cast<std::size_t>(j)] = static_cast<double>(v);
        aq[static_cast<std::size_t>(j)] = v;
      }
      const long b = static_cast<long>(rng.below(50)) + 1;
      fp.add_constraint(a, Relation::LessEqual, static_cast<double>(b));
      qp.add_constraint(aq, Relation::LessEqual, mpq_class(b));
    }
    const auto fs = solve(fp);
    const auto qs = solve(qp);
    ASSERT_EQ(fs.status, Status::Optimal);
    ASSERT_EQ(qs.status, Status::Optimal);
    EXPECT_NEAR(fs.objective, qs.objective.get_d(), 1e-7);
    double dual = 0.0;
    for (int i = 0; i < m; ++i) dual += fs.duals[static_cast<std::size_t>(i)] * fp.rhs[static_cast<std::size_t>(i)];
    EXPECT_NEAR(dual, fs.objective, 1e-7);
  }
}

TEST(ZeroSum, MatchingPenniesDifference) {
  Matrix m(2, 2);
  m << 1, -1, -1, 1;
  const auto s = solve_zero_sum(m);
  EXPECT_NEAR(s.value, 0.0, 1e-9);
  EXPECT_NEAR(s.x(0), 0.5, 1e-9);
  EXPECT_NEAR(s.y(0), 0.5, 1e-9);
}

TEST(ZeroSum, TwoByTwoClosedForm) {
  // Oracle: 2x2 mixing formula. x1 = (d - c) / (a - b - c + d) for
  // M = [[a, b], [c, d]] without a saddle point.
  Matrix m(2, 2);
  m << 0, 2, 1, 0;
  const double a = 0, b = 2, c = 1, d = 0, den = a - b - c + d;
  const double x1 = (d - c) / den, y1 = (d - b) / den, v = (a * d - b * c) / den;
  EXPECT_DOUBLE_EQ(x1, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(y1, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(v, 2.0 / 3.0);
  const auto s = solve_zero_sum(m);
  EXPECT_NEAR(s.x(0), x1, 1e-9);
  EXPECT_NEAR(s.y(0), y1, 1e-9);
  EXPECT_NEAR(s.value, v, 1e-9);
}

TEST(ZeroSum, ConstantMatrix) {
  const auto s = solve_zero_sum(Matrix::Constant(3, 4, 0.25));
  EXPECT_NEAR(s.value, 0.25, 1e-12);
  EXPECT_NEAR(s.x.sum(), 1.0, 1e-12);
  EXPECT_NEAR(s.y.sum(), 1.0, 1e-12);
}

TEST(ZeroSum, GuaranteesAndAntisymmetry) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const Index r = 3, c = 3 + static_cast<Index>(seed % 3);
    Matrix m(r, c);
    for (Index i = 0; i < r; ++i)
      for (Index j = 0; j < c; ++j) m(i, j) = 2 * rng.uniform() - 1;
    const auto s = solve_zero_sum(m);
    ASSERT_NEAR(s.x.sum(), 1.0, 1e-9);
    ASSERT_GE(s.x.minCoeff(), -1e-12);
    const Vector xm = m.transpose() * s.x;
    const Vector my = m * s.y;
    EXPECT_GE(xm.minCoeff(), s.value - 1e-7);
    EXPECT_LE(my.maxCoeff(), s.value + 1e-7);
    EXPECT_GE(s.value, m.minCoeff() - 1e-12);
    EXPECT_LE(s.value, m.maxCoeff() + 1e-12);
    const Matrix neg = -m.transpose();
    EXPECT_NEAR(solve_zero_sum(neg).value, -s.value, 1e-7);
  }
}

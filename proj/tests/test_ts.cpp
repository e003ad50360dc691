#include "bimatrix/gen.hpp"
#include "bimatrix/ts.hpp"
#include "bimatrix/verify.hpp"
#include "helpers.hpp"

#include <gtest/gtest.h>

using namespace bimatrix;
using namespace bimatrix::approx;
using namespace testing_games;

TEST(TsInitFlag, Parses) {
  TsOptions o;
  parse_ts_init("random:17", o);
  EXPECT_EQ(o.init, TsInit::Random);
  EXPECT_EQ(o.init_seed, 17u);
  parse_ts_init("pure:2,3", o);
  EXPECT_EQ(o.init, TsInit::Pure);
  EXPECT_EQ(o.init_row, 1);
  EXPECT_EQ(o.init_col, 2);
  parse_ts_init("bbm", o);
  EXPECT_EQ(o.init, TsInit::Bbm);
  parse_ts_init("uniform", o);
  EXPECT_EQ(o.init, TsInit::Uniform);
  EXPECT_THROW(parse_ts_init("pure:2", o), std::invalid_argument);
  EXPECT_THROW(parse_ts_init("best", o), std::invalid_argument);
}

TEST(TsSegment, MatchesDirectEvaluation) {
  const Game g = gen::gen_random(6, 5, 3);
  const MixedProfile p = detail::ts_start(g, [] {
    TsOptions o;
    o.init = TsInit::Random;
    o.init_seed = 4;
    return o;
  }());
  const MixedProfile q = MixedProfile::pure(6, 5, 2, 1);
  const detail::Segment seg(g, p, q);
  for (double t : {0.0, 0.1, 0.37, 0.5, 0.93, 1.0}) {
    const MixedProfile s{(1 - t) * p.x + t * q.x, (1 - t) * p.y + t * q.y};
    EXPECT_NEAR(seg(t), regrets(g, s).max(), 1e-12);
  }
}

TEST(TsLineSearch, NoWorseThanDenseSampling) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Game g = gen::gen_random(5, 5, seed);
    TsOptions o;
    o.init = TsInit::Random;
    o.init_seed = seed;
    const MixedProfile p = detail::ts_start(g, o);
    o.init_seed = seed + 100;
    const MixedProfile q = detail::ts_start(g, o);
    const detail::Segment seg(g, p, q);
    const auto [t, v] = detail::line_search(seg);
    double dense = seg(0.0);
    for (int k = 1; k <= 4000; ++k) dense = std::min(dense, seg(k / 4000.0));
    EXPECT_NEAR(v, seg(t), 1e-15);
    EXPECT_LE(v, seg(0.0));
    EXPECT_LE(v, dense + 1e-3) << seed;
  }
}

TEST(Ts, EquilibriumStartIsStationary) {
  TsTrace trace;
  TsOptions o;
  const auto r = ts(matching_pennies(), o, &trace);
  EXPECT_EQ(trace.iterations, 0);
  EXPECT_TRUE(trace.stationary);
  EXPECT_NEAR(r.eps, 0.0, 1e-12);
  ASSERT_EQ(trace.lp_rows.size(), 1u);
  EXPECT_EQ(trace.lp_rows[0], 2 + 2 + 2);  // both rows, both columns, two simplex rows
}

TEST(Ts, RejectsNonPositiveDelta) { EXPECT_THROW(ts(matching_pennies(), 0.0), std::invalid_argument); }

TEST(Ts, MonotoneDescentAndHardBound) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Index n = 4 + static_cast<Index>(seed % 12);
    const Game g = seed % 2 ? gen::gen_covariant(n, -0.8, seed) : gen::gen_random(n, n + 2, seed);
    for (double delta : {0.2, 0.05, 0.001}) {
      TsOptions o;
      o.delta = delta;
      TsTrace trace;
      const auto r = ts(g, o, &trace);
      double prev = regrets(g, detail::ts_start(g, o)).max();
      for (double f : trace.objective) {
        EXPECT_LT(f, prev + 1e-15);
        prev = f;
      }
      EXPECT_EQ(trace.objective.size(), static_cast<std::size_t>(trace.iterations));
      EXPECT_EQ(trace.lp_rows.size(), static_cast<std::size_t>(trace.iterations) + 1);
      EXPECT_LE(r.eps, kTsBound + delta + 1e-9);
      const double exact =
          verify::exact_epsilon(RationalGame::from(g), to_rational_profile(r.profile), r.kind).get_d();
      EXPECT_NEAR(exact, r.eps, 1e-7);
    }
  }
}

TEST(Ts, AllInitializationsRespectTheBound) {
  const Game g = load_fixture("fig_a.txt").game;
  for (const char* init : {"uniform", "bbm", "random:1", "random:2", "pure:1,1", "pure:5,3"}) {
    TsOptions o;
    parse_ts_init(init, o);
    EXPECT_LE(ts(g, o).eps, kTsBound + o.delta + 1e-9) << init;
  }
}

TEST(Ts, LpRowsGrowWithSetTolerance) {
  const Game g = gen::gen_random(40, 40, 9);
  TsOptions narrow, wide;
  narrow.delta = 0.001;
  wide.delta = 0.001;
  wide.set_tolerance = 0.2;
  TsTrace a, b;
  ts(g, narrow, &a);
  ts(g, wide, &b);
  EXPECT_LE(a.lp_rows.front(), b.lp_rows.front());
}

TEST(Ts, IterationCap) {
  TsOptions o;
  o.max_iterations = 2;
  TsTrace trace;
  ts(gen::gen_random(30, 30, 2), o, &trace);
  EXPECT_LE(trace.iterations, 2);
}

TEST(Ts, FixedStepVariantDescends) {
  TsOptions o;
  o.delta = 0.1;
  o.step = TsStep::Fixed;
  TsTrace trace;
  const Game g = gen::gen_random(8, 8, 21);
  const auto r = ts(g, o, &trace);
  EXPECT_LE(r.eps, kTsBound + o.delta + 1e-9);
}

TEST(TsSecondPoint, ProducesDistributions) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Game g = gen::gen_random(6, 7, seed);
    TsOptions o;
    o.init = TsInit::Random;
    o.init_seed = seed;
    const MixedProfile p = detail::ts_start(g, o);
    const auto er = detail::near_best(g.row_payoffs() * p.y, 0.05);
    const auto ec = detail::near_best(g.col_payoffs().transpose() * p.x, 0.05);
    const auto d = detail::direction_lp(g, p, er, ec, Deadline::never());
    const MixedProfile s = detail::second_point(g, p, d, er, ec);
    EXPECT_TRUE(is_distribution(s.x, 1e-9));
    EXPECT_TRUE(is_distribution(s.y, 1e-9));
    EXPECT_EQ(d.rows, static_cast<int>(er.size() + ec.size() + 2));
  }
}

TEST(Ts, Timeout) {
  EXPECT_THROW(ts(gen::gen_random(100, 100, 1), 0.001, Deadline::after(0.0)), TimeoutError);
}

TEST(Ts, FixtureWithinHardBound) {
  const auto r = ts(load_fixture("fig_a.txt").game, 0.001);
  EXPECT_LE(r.eps, 0.3404);
}

// Many near-tied best responses make large, degenerate descent LPs.
TEST(Ts, DescentLpsSolveOnLargeGames) {
  for (const Game& g : {gen::gen_blotto(4, 11, 0.9, 2), gen::gen_random(150, 150, 5)}) {
    TsOptions o;
    o.delta = 0.001;
    TsTrace trace;
    const auto r = ts(g, o, &trace);
    EXPECT_TRUE(trace.stationary);
    EXPECT_LE(r.eps, 0.05);
    EXPECT_GT(*std::max_element(trace.lp_rows.begin(), trace.lp_rows.end()), 20);
  }
}

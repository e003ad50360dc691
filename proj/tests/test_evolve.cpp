#include "bimatrix/evolve.hpp"
#include "helpers.hpp"

#include <gtest/gtest.h>

using namespace bimatrix;
using namespace bimatrix::evolve;
using namespace testing_games;

namespace {

Genome fixture_genome(const std::string& name) {
  return genome_from_game(io::read_game_file(fixture(name)).game);
}

}  // namespace

TEST(Genome, FixturesRoundTrip) {
  for (const char* f : {"fig_a.txt", "fig_b.txt", "fig_c.txt", "fig_d.txt"}) {
    const Genome g = fixture_genome(f);
    EXPECT_TRUE(g.valid());
    EXPECT_EQ(genome_from_game(raw_game(g)), g);
  }
  EXPECT_THROW(genome_from_game(Game(Matrix::Constant(2, 2, 0.5), Matrix::Zero(2, 2))), std::invalid_argument);
  EXPECT_THROW(genome_from_game(Game(Matrix::Constant(2, 2, 100000), Matrix::Zero(2, 2))), std::invalid_argument);
}

TEST(FitnessSpec, Validation) {
  FitnessSpec s;
  s.targets = {};
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s.targets = {"ts001", "pure"};
  s.mode = Mode::Single;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s.mode = Mode::Min;
  EXPECT_NO_THROW(s.validate());
  s.targets = {"ts001"};
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s.targets = {"lh", "pure"};
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(Fitness, ConstantGenomeIsZero) {
  Genome g(5, 5);
  std::fill(g.row.begin(), g.row.end(), 42);
  std::fill(g.col.begin(), g.col.end(), 7);
  FitnessSpec s;
  EXPECT_EQ(fitness(g, s), 0.0);
  s.targets = {"ts001", "pure", "bbm2", "ksplus"};
  s.mode = Mode::Min;
  EXPECT_EQ(fitness(g, s), 0.0);
}

TEST(Fitness, PortfolioOnFixtureB) {
  FitnessSpec s;
  s.targets = {"ts001", "pure", "bbm2"};
  s.mode = Mode::Min;
  const Evaluation ev = evaluate(fixture_genome("fig_b.txt"), s);
  ASSERT_EQ(ev.target_eps.size(), 3u);
  EXPECT_NEAR(ev.target_eps[1], 0.324, 1e-3);
  EXPECT_NEAR(ev.target_eps[2], 0.321, 2e-3);
  EXPECT_DOUBLE_EQ(ev.fitness, std::min({ev.target_eps[0], ev.target_eps[1], ev.target_eps[2]}));
}

TEST(Fitness, DominationPenaltyLowersFitness) {
  Rng rng(3);
  Genome g = random_genome(5, 5, rng);
  // Row 4 strictly below row 0 everywhere for the row player.
  for (int j = 0; j < 5; ++j) {
    g.r(0, j) = 60000 + j;
    g.r(4, j) = 100 + j;
  }
  FitnessSpec off;
  off.targets = {"pure"};
  FitnessSpec on = off;
  on.penalize_domination = true;
  const Evaluation a = evaluate(g, off), b = evaluate(g, on);
  EXPECT_GE(b.dominated, 1);
  EXPECT_LT(b.fitness, a.fitness);
  EXPECT_DOUBLE_EQ(b.fitness, a.fitness - 0.1 * b.dominated);

  // Duplicated rows are only weakly dominated.
  Genome dup = g;
  for (int j = 0; j < 5; ++j) dup.r(0, j) = dup.r(4, j) = 99990 + j;
  const auto rows = dominated_strategies(normalize(raw_game(dup)), Side::Row);
  EXPECT_EQ(std::count(rows.begin(), rows.end(), Index{0}), 0);
  EXPECT_EQ(std::count(rows.begin(), rows.end(), Index{4}), 0);
}

TEST(Fitness, MixedDomination) {
  // Row 2 is beaten by the half/half mix of rows 0 and 1, by no single row.
  const Game g = from_rows({{1, 0}, {0, 1}, {0.4, 0.4}}, {{0, 0}, {0, 0}, {0, 0}});
  EXPECT_TRUE(dominated_strategies(g, Side::Row).empty());
  EXPECT_TRUE(mixed_dominated(g.row_payoffs(), 2));
  EXPECT_FALSE(mixed_dominated(g.row_payoffs(), 0));
  EXPECT_EQ(dominated_count(g, true), 1);
  EXPECT_EQ(dominated_count(g, false), 0);
}

TEST(Fitness, TimeoutUsesCeiling) {
  Rng rng(5);
  const Genome g = random_genome(5, 5, rng);
  FitnessSpec s;
  s.targets = {"ts001"};
  s.target_timeout = 0.0;
  const Evaluation ev = evaluate(g, s);
  EXPECT_TRUE(ev.timed_out[0]);
  EXPECT_DOUBLE_EQ(ev.fitness, guarantee_ceiling("ts001"));
}

TEST(Ga, ElitismDeterminismAndBounds) {
  FitnessSpec s;
  s.targets = {"pure"};
  GaParams ga;
  ga.population = 12;
  ga.generations = 8;
  ga.rows = 3;
  ga.cols = 4;
  const auto a = evolve::evolve(s, ga, 11);
  const auto b = evolve::evolve(s, ga, 11);
  ASSERT_EQ(a.history.size(), 9u);
  for (std::size_t k = 0; k < a.history.size(); ++k) {
    EXPECT_EQ(a.history[k].best, b.history[k].best);
    EXPECT_EQ(a.history[k].mean, b.history[k].mean);
    if (k) {
      EXPECT_GE(a.history[k].best, a.history[k - 1].best);
    }
    EXPECT_TRUE(a.history[k].best_genome.valid());
  }
  EXPECT_EQ(a.best, b.best);
  EXPECT_EQ(a.best.m, 3);
  EXPECT_EQ(a.best.n, 4);
  // The reported fitness reproduces on a fresh evaluation.
  EXPECT_EQ(a.verified.fitness, a.best_fitness);
  EXPECT_EQ(fitness(a.best, s), a.best_fitness);
  const auto c = evolve::evolve(s, ga, 12);
  EXPECT_NE(c.history.back().mean, a.history.back().mean);
}

TEST(Ga, ParallelEvaluationMatchesSerial) {
  FitnessSpec s;
  s.targets = {"bbm2", "pure"};
  s.mode = Mode::Min;
  GaParams ga;
  ga.population = 10;
  ga.generations = 3;
  const auto serial = evolve::evolve(s, ga, 4);
  ga.workers = 3;
  const auto parallel = evolve::evolve(s, ga, 4);
  EXPECT_EQ(serial.best, parallel.best);
  EXPECT_EQ(serial.history.back().mean, parallel.history.back().mean);
}

TEST(Ga, ParamValidation) {
  GaParams ga;
  ga.population = 1;
  EXPECT_THROW(evolve::evolve({}, ga, 0), std::invalid_argument);
  ga.population = 4;
  ga.elitism = 5;
  EXPECT_THROW(evolve::evolve({}, ga, 0), std::invalid_argument);
}

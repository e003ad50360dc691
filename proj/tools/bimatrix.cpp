// Command-line front end: generate, solve, check, bench, evolve, and the
// summary/plot helpers that read benchmark output.

#include "bimatrix/bench.hpp"
#include "bimatrix/evolve.hpp"
#include "bimatrix/gen.hpp"
#include "bimatrix/io.hpp"
#include "bimatrix/registry.hpp"
#include "bimatrix/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace bimatrix;

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string exact_decimal(const Rational& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", r.get_d());
  return buf;
}

struct GenerateArgs {
  std::string cls;
  int size = 0;
  double rho = 0.0;
  int hills = 3;
  int soldiers = 0;
  int subset = 2;
  std::uint64_t seed = 0;
  bool jitter = false;
  std::string out;
};

int run_generate(const GenerateArgs& a) {
  gen::GenSpec spec;
  spec.cls = gen::parse_class(a.cls);
  spec.size = a.size;
  spec.rho = a.rho;
  spec.hills = a.hills;
  if (a.soldiers > 0) spec.soldiers = a.soldiers;
  spec.subset = a.subset;
  spec.seed = a.seed;
  spec.jitter = a.jitter;
  if (spec.size < 1 && !spec.soldiers) throw std::invalid_argument("generate: --size must be positive");
  const Game g = gen::generate(spec);
  if (a.out.empty() || a.out == "-") {
    io::write_game(std::cout, g);
  } else {
    io::write_game_file(a.out, g);
    std::cerr << gen::label(spec) << ' ' << g.rows() << 'x' << g.cols() << " -> " << a.out << '\n';
  }
  return 0;
}

struct SolveArgs {
  std::string game;
  bool normalize = false;
  std::string algorithm = "ts";
  double delta = 0.001;
  std::string ts_init;
  int label = 1;
  std::string row;
  double timeout = 0.0;
  bool trace = false;
  std::string profile_out;
};

int run_solve(const SolveArgs& a, const CLI::App& cmd) {
  const auto lg = io::read_game_file(a.game, a.normalize);
  if (!lg.game.is_normalized())
    std::cerr << "warning: payoffs are outside [0,1]; guarantees assume a normalized game (try --normalize)\n";
  Flags flags;
  const bool is_ts = a.algorithm == "ts" || a.algorithm == "ts2" || a.algorithm == "ts001";
  if (a.algorithm == "ts" && cmd.count("--delta")) flags["delta"] = std::to_string(a.delta);
  if (is_ts && !a.ts_init.empty()) flags["init"] = a.ts_init;
  if (a.algorithm == "lh" && cmd.count("--label")) flags["label"] = std::to_string(a.label);
  if (a.algorithm == "dmp" && cmd.count("--row")) flags["row"] = a.row;
  const Deadline deadline = a.timeout > 0 ? Deadline::after(a.timeout) : Deadline::never();

  Stopwatch sw;
  AlgorithmOutput out;
  try {
    out = run_algorithm(a.algorithm, flags, lg.game, lg.exact, deadline);
  } catch (const TimeoutError&) {
    std::cout << "algorithm: " << a.algorithm << "\ntimed out after " << fmt(sw.seconds(), 3) << " s\n";
    return 2;
  }
  const double seconds = sw.seconds();
  const double float_eps = epsilon(lg.game, out.profile, out.kind);
  const Rational exact_eps = verified_epsilon(lg.exact, out);

  std::cout << "algorithm: " << a.algorithm << (flags.empty() ? "" : " [" + format_flags(flags) + "]") << '\n';
  std::cout << "x:";
  for (Index i = 0; i < out.profile.x.size(); ++i) std::cout << ' ' << fmt(out.profile.x(i));
  std::cout << "\ny:";
  for (Index j = 0; j < out.profile.y.size(); ++j) std::cout << ' ' << fmt(out.profile.y(j));
  std::cout << '\n';
  if (out.exact) {
    std::cout << "exact profile:\n";
    io::write_profile(std::cout, *out.exact);
  }
  std::cout << "kind: " << to_string(out.kind) << '\n';
  std::cout << "epsilon (float): " << fmt(float_eps, 9) << '\n';
  std::cout << "epsilon (exact): " << exact_eps.get_str() << " = " << exact_decimal(exact_eps) << '\n';
  std::cout << "time: " << fmt(seconds, 6) << " s\n";
  if (a.algorithm == "se" || a.algorithm == "lh") {
    std::cout << "support: " << out.detail << '\n';
    std::cout << (a.algorithm == "se" ? "support pairs visited: " : "pivots: ") << out.iterations.value_or(0) << '\n';
  } else if (is_ts) {
    std::cout << "iterations: " << out.iterations.value_or(0) << '\n';
    if (!out.detail.empty()) std::cout << out.detail << '\n';
    if (a.trace) {
      std::cout << "iter  lp_rows  objective\n";
      for (std::size_t k = 0; k < out.lp_rows.size(); ++k) {
        std::cout << k + 1 << "  " << out.lp_rows[k];
        if (k < out.objective_trace.size()) std::cout << "  " << fmt(out.objective_trace[k], 9);
        std::cout << '\n';
      }
    }
  }
  if (!a.profile_out.empty()) {
    std::ofstream f(a.profile_out);
    if (!f) throw std::runtime_error("cannot write profile file: " + a.profile_out);
    if (out.exact)
      io::write_profile(f, *out.exact);
    else
      io::write_profile(f, to_rational_profile(out.profile));
  }
  return 0;
}

int run_check(const std::string& game, const std::string& profile, bool normalize, bool well_supported) {
  const auto lg = io::read_game_file(game, normalize);
  const auto p = io::read_profile_file(profile);
  const EpsKind kind = well_supported ? EpsKind::WellSupported : EpsKind::ApproxNE;
  const Rational eps = verify::exact_epsilon(lg.exact, p, kind);
  std::cout << "epsilon (" << to_string(kind) << "): " << eps.get_str() << '\n';
  std::cout << "decimal: " << exact_decimal(eps) << '\n';
  if (sgn(eps) == 0) std::cout << "exact Nash equilibrium\n";
  return 0;
}

int run_bench_cmd(const std::string& config, const std::string& out, int workers, double timeout) {
  bench::BenchConfig cfg = bench::load_config(config);
  if (!out.empty()) cfg.output = out;
  if (workers > 0) cfg.workers = workers;
  if (timeout > 0) cfg.timeout = timeout;
  bench::RunOptions ropt;
  ropt.on_record = [](const bench::BenchRecord& r) {
    std::cerr << r.cls << " n=" << r.size << " seed=" << r.seed << ' ' << r.algorithm
              << (r.flags.empty() ? "" : "[" + r.flags + "]") << ": "
              << (r.timed_out ? std::string("timeout")
                              : r.eps ? "eps=" + fmt(*r.eps) + " t=" + fmt(r.time_s, 3) + "s"
                                      : "error " + r.error)
              << '\n';
  };
  const auto records = bench::run_bench(cfg, ropt);
  std::cerr << records.size() << " new cells written to " << cfg.output << '\n';
  return 0;
}

int run_summarize(const std::string& results, const std::string& out) {
  const auto rows = bench::summarize(bench::read_records(results));
  bench::write_summary_text(std::cout, rows);
  if (!out.empty()) {
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out);
    bench::write_summary_csv(f, rows);
  }
  return 0;
}

int run_frontier(const std::string& results, const std::string& cls, long size, const std::string& out) {
  const auto series = bench::frontier_data(bench::read_records(results), cls, size);
  {
    std::ofstream f(out + ".csv");
    if (!f) throw std::runtime_error("cannot write " + out + ".csv");
    bench::write_frontier_csv(f, series);
  }
  std::ofstream g(out + ".gp");
  bench::write_frontier_gnuplot(g, series, out + ".csv", cls + " n=" + std::to_string(size));
  std::cerr << "wrote " << out << ".csv and " << out << ".gp\n";
  return 0;
}

struct SweepArgs {
  std::vector<std::string> games;
  int size = 100;
  int count = 10;
  std::uint64_t seed = 0;
  std::vector<double> deltas;
  double timeout = 600.0;
  std::string out;
};

int run_sweep(const SweepArgs& a) {
  std::vector<Game> games;
  for (const auto& path : a.games) games.push_back(io::read_game_file(path, true).game);
  if (games.empty())
    for (int k = 0; k < a.count; ++k) games.push_back(gen::gen_random(a.size, a.size, a.seed + static_cast<std::uint64_t>(k)));
  std::vector<double> deltas = a.deltas;
  if (deltas.empty())
    for (int k = 1; k <= 12; ++k) deltas.push_back(0.14 * k / 12.0);
  const auto rows = bench::ts_delta_sweep(games, deltas, a.timeout, [](double d, std::size_t k) {
    std::cerr << "delta=" << d << " game " << k + 1 << '\n';
  });
  bench::write_sweep_csv(std::cout, rows);
  if (!a.out.empty()) {
    std::ofstream f(a.out);
    bench::write_sweep_csv(f, rows);
  }
  std::vector<double> ds, its, lps;
  for (const auto& r : rows) {
    ds.push_back(r.delta);
    its.push_back(r.mean_iterations);
    lps.push_back(r.mean_lp_rows);
  }
  if (rows.size() >= 2)
    std::cerr << "spearman(delta, iterations) = " << fmt(bench::spearman(ds, its), 3)
              << ", spearman(delta, lp rows) = " << fmt(bench::spearman(ds, lps), 3) << '\n';
  return 0;
}

struct EvolveArgs {
  std::string targets = "ts001";
  std::string mode = "single";
  int generations = 200;
  int pop = 100;
  std::uint64_t seed = 0;
  bool penalize = false;
  bool mixed = false;
  double weight = 0.1;
  int rows = 5;
  int cols = 5;
  int tournament = 3;
  double crossover = 0.9;
  double mutation = 0.02;
  int elitism = 2;
  int workers = 1;
  double target_timeout = 10.0;
  std::string out = "best_game.txt";
  std::string history;
};

int run_evolve(const EvolveArgs& a) {
  evolve::FitnessSpec spec;
  spec.targets.clear();
  std::stringstream ss(a.targets);
  for (std::string t; std::getline(ss, t, ',');)
    if (!t.empty()) spec.targets.push_back(t);
  if (a.mode == "single")
    spec.mode = evolve::Mode::Single;
  else if (a.mode == "min")
    spec.mode = evolve::Mode::Min;
  else
    throw std::invalid_argument("evolve: --mode must be single or min");
  spec.penalize_domination = a.penalize || a.mixed;
  spec.mixed_domination = a.mixed;
  spec.penalty_weight = a.weight;
  spec.target_timeout = a.target_timeout;

  evolve::GaParams ga;
  ga.rows = a.rows;
  ga.cols = a.cols;
  ga.population = a.pop;
  ga.generations = a.generations;
  ga.tournament = a.tournament;
  ga.crossover_rate = a.crossover;
  ga.mutation_rate = a.mutation;
  ga.elitism = a.elitism;
  ga.workers = a.workers;

  const std::string history_path = a.history.empty() ? a.out + ".history.jsonl" : a.history;
  std::ofstream hist(history_path);
  if (!hist) throw std::runtime_error("cannot write history file: " + history_path);
  const auto res = evolve::evolve(spec, ga, a.seed, [&](const evolve::GenerationStats& s) {
    nlohmann::json line{{"generation", s.generation}, {"best", s.best}, {"mean", s.mean}, {"worst", s.worst},
                        {"best_row", s.best_genome.row}, {"best_col", s.best_genome.col}};
    hist << line.dump() << '\n' << std::flush;
    std::cerr << "generation " << s.generation << ": best " << fmt(s.best) << " mean " << fmt(s.mean) << '\n';
  });
  io::write_game_file(a.out, evolve::raw_game(res.best));
  std::cout << "best fitness: " << fmt(res.best_fitness) << '\n';
  std::cout << "verified fitness: " << fmt(res.verified.fitness) << '\n';
  for (std::size_t k = 0; k < spec.targets.size(); ++k)
    std::cout << "  " << spec.targets[k] << ": " << fmt(res.verified.target_eps[k])
              << (res.verified.timed_out[k] ? " (timed out)" : "") << '\n';
  if (spec.penalize_domination) std::cout << "  dominated strategies: " << res.verified.dominated << '\n';
  std::cout << "game written to " << a.out << ", history to " << history_path << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bimatrix game solvers, generators, verifier, benchmark harness and worst-case search"};
  app.require_subcommand(1);

  GenerateArgs ga;
  auto* gen_cmd = app.add_subcommand("generate", "Generate a game instance");
  gen_cmd->add_option("--class", ga.cls, "random covariant blotto ranking sgc tournament unit")->required();
  gen_cmd->add_option("--size", ga.size, "strategies per player (k for sgc/tournament)");
  gen_cmd->add_option("--rho", ga.rho, "covariance (covariant, blotto)");
  gen_cmd->add_option("--hills", ga.hills, "blotto hills");
  gen_cmd->add_option("--soldiers", ga.soldiers, "blotto soldiers (defaults to --size)");
  gen_cmd->add_option("--subset", ga.subset, "tournament subset size");
  gen_cmd->add_flag("--jitter", ga.jitter, "sgc: perturb the equilibrium block");
  gen_cmd->add_option("--seed", ga.seed)->required();
  gen_cmd->add_option("--out", ga.out, "output file ('-' for stdout)");

  SolveArgs sa;
  auto* solve_cmd = app.add_subcommand("solve", "Run one algorithm on a game file");
  solve_cmd->add_option("game", sa.game)->required()->check(CLI::ExistingFile);
  solve_cmd->add_flag("--normalize", sa.normalize, "scale each payoff matrix to [0,1] on load");
  solve_cmd->add_option("--algorithm", sa.algorithm)
      ->check(CLI::IsMember({"pure", "dmp", "bbm1", "bbm2", "ts", "ts2", "ts001", "ks", "ksplus", "se", "lh"}));
  solve_cmd->add_option("--delta", sa.delta, "ts: stopping parameter");
  solve_cmd->add_option("--ts-init", sa.ts_init, "uniform | bbm | random:<seed> | pure:<i>,<j>");
  solve_cmd->add_option("--label", sa.label, "lh: initial dropped label (1-based)");
  solve_cmd->add_option("--row", sa.row, "dmp: starting row (1-based) or random:<seed>");
  solve_cmd->add_option("--timeout", sa.timeout, "seconds");
  solve_cmd->add_flag("--trace", sa.trace, "ts: print iteration / LP-size trace");
  solve_cmd->add_option("--profile-out", sa.profile_out, "write the profile (exact p/q tokens)");

  std::string check_game, check_profile;
  bool check_normalize = false, check_ws = false;
  auto* check_cmd = app.add_subcommand("check", "Exact epsilon of a profile");
  check_cmd->add_option("game", check_game)->required()->check(CLI::ExistingFile);
  check_cmd->add_option("profile", check_profile)->required()->check(CLI::ExistingFile);
  check_cmd->add_flag("--normalize", check_normalize);
  check_cmd->add_flag("--ws", check_ws, "well-supported epsilon");

  std::string bench_config, bench_out;
  int bench_workers = 0;
  double bench_timeout = 0.0;
  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark config");
  bench_cmd->add_option("--config", bench_config)->required()->check(CLI::ExistingFile);
  bench_cmd->add_option("--out", bench_out, "results CSV (overrides the config)");
  bench_cmd->add_option("--workers", bench_workers);
  bench_cmd->add_option("--timeout", bench_timeout, "seconds per cell (overrides the config)");

  std::string sum_results, sum_out;
  auto* sum_cmd = app.add_subcommand("summarize", "Completion rates, mean time and epsilon per cell");
  sum_cmd->add_option("results", sum_results)->required()->check(CLI::ExistingFile);
  sum_cmd->add_option("--out", sum_out, "also write a summary CSV");

  std::string fr_results, fr_class, fr_out = "frontier";
  long fr_size = 0;
  auto* fr_cmd = app.add_subcommand("frontier", "Time/epsilon scatter data and a gnuplot script");
  fr_cmd->add_option("results", fr_results)->required()->check(CLI::ExistingFile);
  fr_cmd->add_option("--class", fr_class)->required();
  fr_cmd->add_option("--size", fr_size)->required();
  fr_cmd->add_option("--out", fr_out, "output prefix");

  SweepArgs sw;
  auto* sw_cmd = app.add_subcommand("sweep", "TS delta sweep: iterations and LP rows per delta");
  sw_cmd->add_option("--game", sw.games, "game files (normalized on load); default: random games");
  sw_cmd->add_option("--size", sw.size);
  sw_cmd->add_option("--count", sw.count);
  sw_cmd->add_option("--seed", sw.seed);
  sw_cmd->add_option("--deltas", sw.deltas)->delimiter(',');
  sw_cmd->add_option("--timeout", sw.timeout);
  sw_cmd->add_option("--out", sw.out);

  EvolveArgs ea;
  auto* ev_cmd = app.add_subcommand("evolve", "Genetic search for hard games");
  ev_cmd->add_option("--targets", ea.targets, "comma list of ts001, pure, bbm2, ksplus");
  ev_cmd->add_option("--mode", ea.mode, "single | min");
  ev_cmd->add_option("--generations", ea.generations);
  ev_cmd->add_option("--pop", ea.pop);
  ev_cmd->add_option("--seed", ea.seed);
  ev_cmd->add_flag("--penalize-domination", ea.penalize, "subtract weight per strictly dominated strategy");
  ev_cmd->add_flag("--mixed-domination", ea.mixed, "count domination by mixed strategies (implies the penalty)");
  ev_cmd->add_option("--penalty-weight", ea.weight);
  ev_cmd->add_option("--rows", ea.rows);
  ev_cmd->add_option("--cols", ea.cols);
  ev_cmd->add_option("--tournament", ea.tournament);
  ev_cmd->add_option("--crossover", ea.crossover);
  ev_cmd->add_option("--mutation", ea.mutation);
  ev_cmd->add_option("--elitism", ea.elitism);
  ev_cmd->add_option("--workers", ea.workers);
  ev_cmd->add_option("--target-timeout", ea.target_timeout);
  ev_cmd->add_option("--out", ea.out);
  ev_cmd->add_option("--history", ea.history, "JSON-lines history (default <out>.history.jsonl)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*gen_cmd) return run_generate(ga);
    if (*solve_cmd) return run_solve(sa, *solve_cmd);
    if (*check_cmd) return run_check(check_game, check_profile, check_normalize, check_ws);
    if (*bench_cmd) return run_bench_cmd(bench_config, bench_out, bench_workers, bench_timeout);
    if (*sum_cmd) return run_summarize(sum_results, sum_out);
    if (*fr_cmd) return run_frontier(fr_results, fr_class, fr_size, fr_out);
    if (*sw_cmd) return run_sweep(sw);
    if (*ev_cmd) return run_evolve(ea);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

#pragma once

// Benchmark harness: experiment matrices from a config, per-cell wall-clock
// timeouts, solver-only timing, exact re-verification of every epsilon, an
// append-only CSV that doubles as a resume log, and summary / plot data.

#include "bimatrix/deadline.hpp"
#include "bimatrix/game.hpp"
#include "bimatrix/gen.hpp"
#include "bimatrix/io.hpp"
#include "bimatrix/registry.hpp"
#include "bimatrix/toml.hpp"
#include "bimatrix/ts.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

namespace bimatrix::bench {

// ---------------------------------------------------------------------------
// Configuration

struct GameSource {
  gen::GenSpec spec;               // generated games
  std::optional<std::string> file;  // or a game file
  bool normalize = true;            // file games only
  int seeds = 1;
  std::uint64_t base_seed = 0;      // seed_i = base_seed + i
};

struct AlgorithmEntry {
  std::string id;
  std::string flags;  // canonical form
};

struct BenchConfig {
  std::vector<GameSource> games;
  std::vector<AlgorithmEntry> algorithms;
  double timeout = 900.0;
  int workers = 1;
  std::string output = "results.csv";

  void validate() const {
    if (!(timeout > 0.0)) throw std::invalid_argument("bench config: timeout must be positive");
    if (games.empty()) throw std::invalid_argument("bench config: no games");
    if (algorithms.empty()) throw std::invalid_argument("bench config: no algorithms");
    if (workers < 1) throw std::invalid_argument("bench config: workers must be >= 1");
    for (const auto& g : games)
      if (g.seeds < 1) throw std::invalid_argument("bench config: seeds must be >= 1");
  }
};

// Schema:
//   timeout = 60            # seconds per cell
//   workers = 1
//   output = "results.csv"
//   [[games]]
//   class = "covariant"     # random covariant blotto ranking sgc tournament unit
//   size = 100
//   rho = -0.9              # covariant, blotto
//   hills = 3               # blotto; soldiers defaults to size
//   soldiers = 13
//   subset = 2              # tournament
//   seeds = 25
//   base_seed = 0
//   [[games]]
//   file = "game.txt"       # instead of class/size
//   normalize = true
//   [[algorithms]]
//   name = "ts"
//   flags = "delta=0.05"
// A plain list also works: algorithms = ["pure", "dmp", "ts001"].
inline BenchConfig parse_config(const toml::Document& doc) {
  BenchConfig cfg;
  cfg.timeout = doc.root.get_number("timeout", cfg.timeout);
  cfg.workers = static_cast<int>(doc.root.get_integer("workers", cfg.workers));
  cfg.output = doc.root.get_string("output", cfg.output);
  for (const auto& t : doc.array("games")) {
    GameSource src;
    if (t.contains("file")) {
      src.file = t.get_string("file", "");
      src.normalize = t.get_bool("normalize", true);
    } else {
      src.spec.cls = gen::parse_class(t.get_string("class", "random"));
      src.spec.size = static_cast<int>(t.get_integer("size", 0));
      src.spec.rho = t.get_number("rho", 0.0);
      src.spec.hills = static_cast<int>(t.get_integer("hills", 3));
      if (t.contains("soldiers")) src.spec.soldiers = static_cast<int>(t.get_integer("soldiers", 0));
      src.spec.subset = static_cast<int>(t.get_integer("subset", 2));
      src.spec.jitter = t.get_bool("jitter", false);
      if (src.spec.size < 1 && !(src.spec.cls == gen::GameClass::Blotto && src.spec.soldiers))
        throw std::invalid_argument("bench config: game entry needs a positive size");
    }
    src.seeds = static_cast<int>(t.get_integer("seeds", 1));
    src.base_seed = static_cast<std::uint64_t>(t.get_integer("base_seed", 0));
    cfg.games.push_back(std::move(src));
  }
  if (const toml::Value* list = doc.root.find("algorithms")) {
    if (!list->is_array()) throw std::invalid_argument("bench config: algorithms must be an array");
    for (const auto& v : list->as_array()) {
      if (!v.is_string()) throw std::invalid_argument("bench config: algorithm names must be strings");
      cfg.algorithms.push_back({v.as_string(), ""});
    }
  }
  for (const auto& t : doc.array("algorithms")) {
    AlgorithmEntry a;
    a.id = t.get_string("name", "");
    a.flags = format_flags(parse_flags(t.get_string("flags", "")));
    cfg.algorithms.push_back(std::move(a));
  }
  for (const auto& a : cfg.algorithms)
    if (std::find(algorithm_ids().begin(), algorithm_ids().end(), a.id) == algorithm_ids().end())
      throw std::invalid_argument("bench config: unknown algorithm '" + a.id + "'");
  cfg.validate();
  return cfg;
}

inline BenchConfig load_config(const std::string& path) { return parse_config(toml::parse_file(path)); }

// ---------------------------------------------------------------------------
// Records and CSV

struct BenchRecord {
  std::string cls;
  long size = 0;
  std::uint64_t seed = 0;
  std::string algorithm;
  std::string flags;
  double time_s = 0.0;
  std::optional<double> eps;  // absent on timeout or failure
  std::string kind;           // "ne", "wsne", or "error"
  bool timed_out = false;
  std::optional<long> iterations;
  std::optional<double> mean_lp_rows;  // not persisted in the CSV
  std::string error;                   // not persisted in the CSV

  bool completed() const { return !timed_out && eps.has_value(); }
};

inline const char* kCsvHeader = "class,size,seed,algorithm,flags,time_s,eps,kind,timed_out,iterations";

using CellKey = std::tuple<std::string, long, std::uint64_t, std::string, std::string>;

inline CellKey key_of(const BenchRecord& r) { return {r.cls, r.size, r.seed, r.algorithm, r.flags}; }

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        cur += '"';
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

inline std::string format_record(const BenchRecord& r) {
  char num[64];
  std::string line = csv_field(r.cls) + "," + std::to_string(r.size) + "," + std::to_string(r.seed) +
                     "," + csv_field(r.algorithm) + "," + csv_field(r.flags) + ",";
  std::snprintf(num, sizeof num, "%.6f", r.time_s);
  line += num;
  line += ",";
  if (r.eps) {
    std::snprintf(num, sizeof num, "%.12g", *r.eps);
    line += num;
  }
  line += "," + r.kind + "," + (r.timed_out ? "true" : "false") + ",";
  if (r.iterations) line += std::to_string(*r.iterations);
  return line;
}

inline BenchRecord parse_record(const std::string& line) {
  const auto f = split_csv_line(line);
  if (f.size() != 10) throw std::runtime_error("malformed results row: " + line);
  BenchRecord r;
  r.cls = f[0];
  r.size = std::stol(f[1]);
  r.seed = std::stoull(f[2]);
  r.algorithm = f[3];
  r.flags = f[4];
  r.time_s = std::stod(f[5]);
  if (!f[6].empty()) r.eps = std::stod(f[6]);
  r.kind = f[7];
  r.timed_out = f[8] == "true";
  if (!f[9].empty()) r.iterations = std::stol(f[9]);
  return r;
}

inline std::vector<BenchRecord> read_records(const std::string& path) {
  std::vector<BenchRecord> out;
  std::ifstream in(path);
  if (!in) return out;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line == kCsvHeader) continue;
      throw std::runtime_error("results file has an unexpected header: " + path);
    }
    out.push_back(parse_record(line));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Running cells

struct LoadedInstance {
  Game game;
  RationalGame exact;
  std::string cls;
  long size = 0;
  std::uint64_t seed = 0;
};

inline LoadedInstance load_instance(const GameSource& src, int index) {
  LoadedInstance inst{Game(Matrix::Zero(1, 1), Matrix::Zero(1, 1)), {}, {}, 0, 0};
  if (src.file) {
    auto lg = io::read_game_file(*src.file, src.normalize);
    inst.game = std::move(lg.game);
    inst.exact = std::move(lg.exact);
    inst.cls = std::filesystem::path(*src.file).stem().string();
    inst.size = static_cast<long>(inst.game.rows());
    inst.seed = 0;
    return inst;
  }
  gen::GenSpec spec = src.spec;
  spec.seed = src.base_seed + static_cast<std::uint64_t>(index);
  inst.game = gen::generate(spec);
  inst.exact = RationalGame::from(inst.game);
  inst.cls = gen::label(spec);
  inst.size = spec.cls == gen::GameClass::Blotto && spec.soldiers ? *spec.soldiers : spec.size;
  inst.seed = spec.seed;
  return inst;
}

struct CellOutcome {
  std::optional<AlgorithmOutput> output;
  double seconds = 0.0;
  bool timed_out = false;
  std::string error;
};

// Runs the solver on its own thread under a cooperative deadline. A watchdog
// waits until timeout + 10%; a solver still running then is abandoned
// (detached, owning its state) and the cell is recorded as timed out.
inline CellOutcome run_cell(const std::string& id, const Flags& flags, const LoadedInstance& inst,
                            double timeout) {
  struct Shared {
    std::mutex mu;
    std::condition_variable cv;
    bool done = false;
    CellOutcome outcome;
    std::shared_ptr<std::atomic<bool>> cancel = std::make_shared<std::atomic<bool>>(false);
    Shared(Game g, RationalGame e, std::string i, Flags f)
        : game(std::move(g)), exact(std::move(e)), id(std::move(i)), flags(std::move(f)) {}
    Game game;
    RationalGame exact;
    std::string id;
    Flags flags;
  };
  auto sh = std::make_shared<Shared>(inst.game, inst.exact, id, flags);
  const Deadline deadline = Deadline::after(timeout).with_flag(sh->cancel);
  std::thread worker([sh, deadline] {
    CellOutcome out;
    Stopwatch sw;
    try {
      out.output = run_algorithm(sh->id, sh->flags, sh->game, sh->exact, deadline);
      out.seconds = sw.seconds();
    } catch (const TimeoutError&) {
      out.seconds = sw.seconds();
      out.timed_out = true;
    } catch (const std::exception& e) {
      out.seconds = sw.seconds();
      out.error = e.what();
    }
    std::lock_guard<std::mutex> lock(sh->mu);
    sh->outcome = std::move(out);
    sh->done = true;
    sh->cv.notify_all();
  });
  std::unique_lock<std::mutex> lock(sh->mu);
  const auto limit = std::chrono::duration<double>(timeout * 1.1);
  if (!sh->cv.wait_for(lock, limit, [&] { return sh->done; })) {
    sh->cancel->store(true);
    lock.unlock();
    worker.detach();
    CellOutcome out;
    out.seconds = timeout * 1.1;
    out.timed_out = true;
    return out;
  }
  CellOutcome out = std::move(sh->outcome);
  lock.unlock();
  worker.join();
  if (out.seconds > timeout && !out.timed_out) out.timed_out = true;  // finished, but too late
  return out;
}

inline BenchRecord make_record(const LoadedInstance& inst, const AlgorithmEntry& algo,
                               const CellOutcome& out) {
  BenchRecord r;
  r.cls = inst.cls;
  r.size = inst.size;
  r.seed = inst.seed;
  r.algorithm = algo.id;
  r.flags = algo.flags;
  r.time_s = out.seconds;
  r.timed_out = out.timed_out;
  if (out.timed_out) {
    r.kind = "timeout";
    return r;
  }
  if (!out.output) {
    r.kind = "error";
    r.error = out.error;
    return r;
  }
  const AlgorithmOutput& o = *out.output;
  r.kind = to_string(o.kind);
  r.iterations = o.iterations;
  if (!o.lp_rows.empty())
    r.mean_lp_rows = std::accumulate(o.lp_rows.begin(), o.lp_rows.end(), 0.0) /
                     static_cast<double>(o.lp_rows.size());
  // Never trust the solver's own number: recompute exactly.
  try {
    r.eps = verified_epsilon(inst.exact, o).get_d();
  } catch (const std::exception& e) {
    r.kind = "error";
    r.error = std::string("verification failed: ") + e.what();
  }
  return r;
}

struct RunOptions {
  std::function<void(const BenchRecord&)> on_record;  // called under the writer lock
  bool write_csv = true;
};

// Runs every pending cell of the config. Cells already present in the output
// file are skipped, so rerunning a finished config does nothing.
inline std::vector<BenchRecord> run_bench(const BenchConfig& cfg, const RunOptions& ropt = {}) {
  cfg.validate();
  std::set<CellKey> done;
  if (ropt.write_csv)
    for (const auto& r : read_records(cfg.output)) done.insert(key_of(r));

  std::ofstream csv;
  if (ropt.write_csv) {
    const bool fresh = !std::filesystem::exists(cfg.output) || std::filesystem::file_size(cfg.output) == 0;
    csv.open(cfg.output, std::ios::app);
    if (!csv) throw std::runtime_error("cannot open results file: " + cfg.output);
    if (fresh) csv << kCsvHeader << '\n' << std::flush;
  }

  struct Task {
    std::size_t source;
    int index;
  };
  std::vector<Task> tasks;
  for (std::size_t s = 0; s < cfg.games.size(); ++s)
    for (int i = 0; i < cfg.games[s].seeds; ++i) tasks.push_back({s, i});

  std::mutex writer;
  std::vector<BenchRecord> produced;
  std::atomic<std::size_t> next{0};
  auto emit = [&](BenchRecord r) {
    std::lock_guard<std::mutex> lock(writer);
    if (ropt.write_csv) csv << format_record(r) << '\n' << std::flush;
    if (ropt.on_record) ropt.on_record(r);
    produced.push_back(std::move(r));
  };
  auto work = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      const auto& src = cfg.games[tasks[t].source];
      // Generation and loading happen outside the timed region.
      std::optional<LoadedInstance> inst;
      std::string load_error;
      try {
        inst = load_instance(src, tasks[t].index);
      } catch (const std::exception& e) {
        load_error = e.what();
      }
      for (const auto& algo : cfg.algorithms) {
        if (!inst) {
          BenchRecord r;
          r.cls = src.file ? *src.file : gen::label(src.spec);
          r.size = src.spec.size;
          r.seed = src.base_seed + static_cast<std::uint64_t>(tasks[t].index);
          r.algorithm = algo.id;
          r.flags = algo.flags;
          r.kind = "error";
          r.error = load_error;
          emit(std::move(r));
          continue;
        }
        {
          std::lock_guard<std::mutex> lock(writer);
          if (done.count({inst->cls, inst->size, inst->seed, algo.id, algo.flags})) continue;
        }
        const CellOutcome out = run_cell(algo.id, parse_flags(algo.flags), *inst, cfg.timeout);
        emit(make_record(*inst, algo, out));
      }
    }
  };
  const int workers = std::max(1, std::min<int>(cfg.workers, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  return produced;
}

// ---------------------------------------------------------------------------
// Summaries and plot data

struct SummaryRow {
  std::string cls;
  long size = 0;
  std::string algorithm;
  std::string flags;
  int total = 0;
  int completed = 0;
  double completion_pct = 0.0;
  std::optional<double> mean_time;
  std::optional<double> mean_eps;
};

inline std::vector<SummaryRow> summarize(const std::vector<BenchRecord>& records) {
  if (records.empty()) throw std::invalid_argument("summarize: no records");
  std::map<std::tuple<std::string, long, std::string, std::string>, SummaryRow> groups;
  std::vector<std::tuple<std::string, long, std::string, std::string>> order;
  std::map<std::tuple<std::string, long, std::string, std::string>, std::pair<double, double>> sums;
  for (const auto& r : records) {
    const auto key = std::make_tuple(r.cls, r.size, r.algorithm, r.flags);
    auto [it, fresh] = groups.try_emplace(key);
    if (fresh) {
      order.push_back(key);
      it->second.cls = r.cls;
      it->second.size = r.size;
      it->second.algorithm = r.algorithm;
      it->second.flags = r.flags;
    }
    ++it->second.total;
    if (r.completed()) {
      ++it->second.completed;
      sums[key].first += r.time_s;
      sums[key].second += *r.eps;
    }
  }
  std::vector<SummaryRow> out;
  for (const auto& key : order) {
    SummaryRow row = groups[key];
    row.completion_pct = 100.0 * row.completed / row.total;
    if (row.completed > 0) {
      row.mean_time = sums[key].first / row.completed;
      row.mean_eps = sums[key].second / row.completed;
    }
    out.push_back(std::move(row));
  }
  return out;
}

inline void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "class,size,algorithm,flags,instances,completed,completion_pct,mean_time_s,mean_eps\n";
  char buf[64];
  for (const auto& r : rows) {
    out << csv_field(r.cls) << ',' << r.size << ',' << csv_field(r.algorithm) << ','
        << csv_field(r.flags) << ',' << r.total << ',' << r.completed << ',';
    std::snprintf(buf, sizeof buf, "%.1f", r.completion_pct);
    out << buf << ',';
    if (r.mean_time) {
      std::snprintf(buf, sizeof buf, "%.6f", *r.mean_time);
      out << buf;
    }
    out << ',';
    if (r.mean_eps) {
      std::snprintf(buf, sizeof buf, "%.6f", *r.mean_eps);
      out << buf;
    }
    out << '\n';
  }
}

inline void write_summary_text(std::ostream& out, const std::vector<SummaryRow>& rows) {
  std::vector<std::vector<std::string>> cells{
      {"class", "size", "algorithm", "flags", "done%", "mean time (s)", "mean eps"}};
  char buf[64];
  for (const auto& r : rows) {
    std::vector<std::string> line{r.cls, std::to_string(r.size), r.algorithm, r.flags.empty() ? "-" : r.flags};
    std::snprintf(buf, sizeof buf, "%.0f", r.completion_pct);
    line.emplace_back(buf);
    if (r.mean_time) std::snprintf(buf, sizeof buf, "%.4f", *r.mean_time);
    line.emplace_back(r.mean_time ? buf : "-");
    if (r.mean_eps) std::snprintf(buf, sizeof buf, "%.4f", *r.mean_eps);
    line.emplace_back(r.mean_eps ? buf : "-");
    cells.push_back(std::move(line));
  }
  std::vector<std::size_t> width(cells.front().size(), 0);
  for (const auto& line : cells)
    for (std::size_t k = 0; k < line.size(); ++k) width[k] = std::max(width[k], line[k].size());
  for (const auto& line : cells) {
    for (std::size_t k = 0; k < line.size(); ++k) {
      out << line[k];
      if (k + 1 < line.size()) out << std::string(width[k] - line[k].size() + 2, ' ');
    }
    out << '\n';
  }
}

struct Series {
  std::string name;  // algorithm, with flags in brackets when present
  std::vector<std::pair<double, double>> points;  // (time_s, eps)
};

inline std::vector<Series> frontier_data(const std::vector<BenchRecord>& records,
                                         const std::string& cls, long size) {
  std::vector<Series> out;
  std::map<std::string, std::size_t> index;
  for (const auto& r : records) {
    if (r.cls != cls || r.size != size || !r.completed()) continue;
    const std::string name = r.flags.empty() ? r.algorithm : r.algorithm + "[" + r.flags + "]";
    auto [it, fresh] = index.try_emplace(name, out.size());
    if (fresh) out.push_back({name, {}});
    out[it->second].points.emplace_back(r.time_s, *r.eps);
  }
  if (out.empty()) throw std::invalid_argument("frontier_data: no completed records for " + cls);
  return out;
}

inline void write_frontier_csv(std::ostream& out, const std::vector<Series>& series) {
  out << "series,time_s,eps\n";
  char buf[96];
  for (const auto& s : series)
    for (const auto& [t, e] : s.points) {
      std::snprintf(buf, sizeof buf, ",%.6f,%.6f\n", t, e);
      out << csv_field(s.name) << buf;
    }
}

// Gnuplot script plotting every series of `csv_path` on log-time axes.
inline void write_frontier_gnuplot(std::ostream& out, const std::vector<Series>& series,
                                   const std::string& csv_path, const std::string& title) {
  out << "set datafile separator ','\n"
      << "set logscale x\n"
      << "set xlabel 'time (s)'\nset ylabel 'epsilon'\n"
      << "set title '" << title << "'\n"
      << "plot ";
  for (std::size_t k = 0; k < series.size(); ++k) {
    out << (k ? ", \\\n     " : "") << "'" << csv_path << "' using 2:(strcol(1) eq '" << series[k].name
        << "' ? $3 : 1/0) title '" << series[k].name << "' with points";
  }
  out << '\n';
}

struct SweepRow {
  double delta = 0.0;
  int games = 0;
  int completed = 0;
  double mean_time = 0.0;
  double mean_eps = 0.0;
  double mean_iterations = 0.0;
  double mean_lp_rows = 0.0;  // per-iteration LP rows, averaged per run then over runs
};

// Runs TS for every delta on every game. With a single game this is the
// per-instance view; with many it averages.
inline std::vector<SweepRow> ts_delta_sweep(const std::vector<Game>& games,
                                            const std::vector<double>& deltas, double timeout,
                                            const std::function<void(double, std::size_t)>& progress = {}) {
  std::vector<SweepRow> out;
  for (double d : deltas) {
    if (!(d > 0.0)) throw std::invalid_argument("ts_delta_sweep: deltas must be positive");
    SweepRow row;
    row.delta = d;
    for (std::size_t k = 0; k < games.size(); ++k) {
      if (progress) progress(d, k);
      ++row.games;
      approx::TsOptions opt;
      opt.delta = d;
      opt.deadline = Deadline::after(timeout);
      try {
        Stopwatch sw;
        approx::TsTrace trace;
        const ApproxResult r = approx::ts(games[k], opt, &trace);
        const double t = sw.seconds();
        ++row.completed;
        row.mean_time += t;
        row.mean_eps += r.eps;
        row.mean_iterations += static_cast<double>(trace.iterations);
        row.mean_lp_rows += std::accumulate(trace.lp_rows.begin(), trace.lp_rows.end(), 0.0) /
                            static_cast<double>(std::max<std::size_t>(1, trace.lp_rows.size()));
      } catch (const TimeoutError&) {
      }
    }
    if (row.completed > 0) {
      row.mean_time /= row.completed;
      row.mean_eps /= row.completed;
      row.mean_iterations /= row.completed;
      row.mean_lp_rows /= row.completed;
    }
    out.push_back(row);
  }
  return out;
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "delta,games,completed,mean_time_s,mean_eps,mean_iterations,mean_lp_rows\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.6g,%d,%d,%.6f,%.6f,%.3f,%.3f\n", r.delta, r.games, r.completed,
                  r.mean_time, r.mean_eps, r.mean_iterations, r.mean_lp_rows);
    out << buf;
  }
}

// Spearman rank correlation (average ranks on ties).
inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) throw std::invalid_argument("spearman: need two equal-length series");
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t l, std::size_t r) { return v[l] < v[r]; });
    std::vector<double> rk(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
      for (std::size_t k = i; k <= j; ++k) rk[idx[k]] = avg;
      i = j + 1;
    }
    return rk;
  };
  const auto ra = ranks(a), rb = ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t k = 0; k < ra.size(); ++k) {
    sab += (ra[k] - ma) * (rb[k] - mb);
    saa += (ra[k] - ma) * (ra[k] - ma);
    sbb += (rb[k] - mb) * (rb[k] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace bimatrix::bench

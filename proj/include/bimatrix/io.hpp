#pragma once

// Plain-text game and profile formats.
//
// Game:    line 1 "m n"; m lines of n entries (row player); a blank line;
//          m lines of n entries (column player). Entries are integers,
//          decimals or p/q fractions.
// Profile: first non-empty line holds x, second holds y; same token syntax.

#include "bimatrix/game.hpp"
#include "bimatrix/rational.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bimatrix::io {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Both views of a parsed file: the exact entries and the nearest doubles.
struct LoadedGame {
  RationalGame exact;
  Game game;
};

inline double parse_double(const std::string& tok) {
  if (tok.find('/') != std::string::npos) return parse_rational(tok).get_d();
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0') throw ParseError("bad number: " + tok);
  return v;
}

inline LoadedGame read_game(std::istream& in, bool normalize_payoffs = false,
                            std::string name = {}) {
  long m = 0, n = 0;
  if (!(in >> m >> n) || m < 1 || n < 1) throw ParseError("game header must be 'm n' with m,n >= 1");
  const auto count = static_cast<std::size_t>(m) * static_cast<std::size_t>(n);
  std::vector<std::string> tokens;
  tokens.reserve(2 * count);
  std::string tok;
  while (tokens.size() < 2 * count && in >> tok) tokens.push_back(tok);
  if (tokens.size() < 2 * count) throw ParseError("game file truncated");
  if (in >> tok) throw ParseError("trailing data after game matrices: " + tok);

  RationalMatrix er(static_cast<std::size_t>(m), static_cast<std::size_t>(n));
  RationalMatrix ec(static_cast<std::size_t>(m), static_cast<std::size_t>(n));
  Matrix dr(m, n), dc(m, n);
  try {
    for (long i = 0; i < m; ++i) {
      for (long j = 0; j < n; ++j) {
        const auto k = static_cast<std::size_t>(i * n + j);
        er(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = parse_rational(tokens[k]);
        ec(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = parse_rational(tokens[count + k]);
        dr(i, j) = parse_double(tokens[k]);
        dc(i, j) = parse_double(tokens[count + k]);
      }
    }
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  RationalGame exact{std::move(er), std::move(ec)};
  Game game(std::move(dr), std::move(dc), std::move(name));
  if (normalize_payoffs) {
    exact = normalize(exact);
    game = normalize(game);
  }
  return {std::move(exact), std::move(game)};
}

inline LoadedGame read_game_file(const std::string& path, bool normalize_payoffs = false) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open game file: " + path);
  return read_game(in, normalize_payoffs, path);
}

inline void write_matrix(std::ostream& out, const Matrix& a) {
  char buf[64];
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", a(i, j));
      out << (j ? " " : "") << buf;
    }
    out << '\n';
  }
}

// Entries are written with 17 significant digits, so reading the file back
// reproduces every double exactly.
inline void write_game(std::ostream& out, const Game& g) {
  out << g.rows() << ' ' << g.cols() << '\n';
  write_matrix(out, g.row_payoffs());
  out << '\n';
  write_matrix(out, g.col_payoffs());
}

inline void write_game_file(const std::string& path, const Game& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write game file: " + path);
  write_game(out, g);
}

inline std::vector<std::string> split_tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string t;
  while (ss >> t) out.push_back(t);
  return out;
}

inline RationalProfile read_profile(std::istream& in) {
  std::vector<std::vector<std::string>> lines;
  std::string line;
  while (lines.size() < 2 && std::getline(in, line)) {
    auto toks = split_tokens(line);
    if (!toks.empty()) lines.push_back(std::move(toks));
  }
  if (lines.size() < 2) throw ParseError("profile needs two non-empty lines (x, then y)");
  RationalProfile p;
  try {
    for (const auto& t : lines[0]) p.x.push_back(parse_rational(t));
    for (const auto& t : lines[1]) p.y.push_back(parse_rational(t));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  return p;
}

inline RationalProfile read_profile_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open profile file: " + path);
  return read_profile(in);
}

inline void write_profile(std::ostream& out, const MixedProfile& p) {
  char buf[64];
  for (Index i = 0; i < p.x.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", p.x(i));
    out << (i ? " " : "") << buf;
  }
  out << '\n';
  for (Index j = 0; j < p.y.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g", p.y(j));
    out << (j ? " " : "") << buf;
  }
  out << '\n';
}

inline void write_profile(std::ostream& out, const RationalProfile& p) {
  for (std::size_t i = 0; i < p.x.size(); ++i) out << (i ? " " : "") << p.x[i].get_str();
  out << '\n';
  for (std::size_t j = 0; j < p.y.size(); ++j) out << (j ? " " : "") << p.y[j].get_str();
  out << '\n';
}

}  // namespace bimatrix::io

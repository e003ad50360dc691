#pragma once

#include "bimatrix/game.hpp"
#include "bimatrix/io.hpp"
#include "bimatrix/rational.hpp"

#include <string>

namespace testing_games {

using bimatrix::Game;
using bimatrix::Matrix;

inline Game from_rows(std::initializer_list<std::initializer_list<double>> r,
                      std::initializer_list<std::initializer_list<double>> c) {
  auto fill = [](std::initializer_list<std::initializer_list<double>> rows) {
    Matrix a(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& row : rows) {
      Eigen::Index j = 0;
      for (double v : row) a(i, j++) = v;
      ++i;
    }
    return a;
  };
  return Game(fill(r), fill(c));
}

// Row wins on a match.
inline Game matching_pennies() { return from_rows({{1, 0}, {0, 1}}, {{0, 1}, {1, 0}}); }

inline Game coordination() { return from_rows({{1, 0}, {0, 1}}, {{1, 0}, {0, 1}}); }

// Rock-paper-scissors scaled to [0,1]: win 1, tie 1/2, loss 0.
inline Game rps() {
  return from_rows({{0.5, 0, 1}, {1, 0.5, 0}, {0, 1, 0.5}}, {{0.5, 1, 0}, {0, 0.5, 1}, {1, 0, 0.5}});
}

inline std::string fixture(const std::string& name) { return std::string(BIMATRIX_DATA_DIR) + "/fixtures/" + name; }

inline bimatrix::io::LoadedGame load_fixture(const std::string& name) {
  return bimatrix::io::read_game_file(fixture(name), true);
}

}  // namespace testing_games

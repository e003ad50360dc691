#pragma once

// Arbitrary-precision rational matrices and games (GMP backed).

#include "bimatrix/game.hpp"

#include <gmpxx.h>

#include <cctype>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bimatrix {

using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  // Exact: every finite double is a dyadic rational.
  static RationalMatrix from(const Matrix& a) {
    RationalMatrix out(static_cast<std::size_t>(a.rows()), static_cast<std::size_t>(a.cols()));
    for (Index i = 0; i < a.rows(); ++i)
      for (Index j = 0; j < a.cols(); ++j)
        out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = Rational(a(i, j));
    return out;
  }

  Matrix to_double() const {
    Matrix out(static_cast<Index>(rows_), static_cast<Index>(cols_));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        out(static_cast<Index>(i), static_cast<Index>(j)) = (*this)(i, j).get_d();
    return out;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

struct RationalGame {
  RationalMatrix row;
  RationalMatrix col;

  std::size_t rows() const { return row.rows(); }
  std::size_t cols() const { return row.cols(); }

  static RationalGame from(const Game& g) {
    return {RationalMatrix::from(g.row_payoffs()), RationalMatrix::from(g.col_payoffs())};
  }
  Game to_double(std::string name = {}) const {
    return Game(row.to_double(), col.to_double(), std::move(name));
  }
};

struct RationalProfile {
  RationalVector x;
  RationalVector y;
};

inline RationalMatrix normalize(const RationalMatrix& a) {
  RationalMatrix out(a.rows(), a.cols());
  if (a.rows() == 0 || a.cols() == 0) return out;
  Rational lo = a(0, 0), hi = a(0, 0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j) < lo) lo = a(i, j);
      if (a(i, j) > hi) hi = a(i, j);
    }
  if (lo == hi) return out;
  const Rational span = hi - lo;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = (a(i, j) - lo) / span;
  return out;
}

inline RationalGame normalize(const RationalGame& g) {
  return {normalize(g.row), normalize(g.col)};
}

// Parses "p/q", an integer, or a plain decimal ("-0.125", "3e-2") exactly.
inline Rational parse_rational(std::string_view token) {
  const std::string s(token);
  if (s.empty()) throw std::invalid_argument("empty rational token");
  if (s.find('/') != std::string::npos) {
    Rational r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational token: " + s);
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    r.canonicalize();
    return r;
  }
  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  for (; pos < s.size(); ++pos) {
    const char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_point) ++frac_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  long exponent = 0;
  if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
    try {
      std::size_t used = 0;
      exponent = std::stol(s.substr(pos + 1), &used);
      pos += 1 + used;
    } catch (const std::exception&) {
      throw std::invalid_argument("bad exponent in number: " + s);
    }
  }
  if (digits.empty() || pos != s.size()) throw std::invalid_argument("bad number: " + s);
  mpz_class num(digits, 10);
  if (negative) num = -num;
  const long shift = exponent - frac_digits;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  Rational r = shift < 0 ? Rational(num, scale) : Rational(num * scale);
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline RationalVector to_rational(const Vector& v) {
  RationalVector out;
  out.reserve(static_cast<std::size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) out.emplace_back(v(i));
  return out;
}

// Exact stochastic vector from a floating-point one: negatives clipped to
// zero, then divided by the exact sum.
inline RationalVector to_rational_distribution(const Vector& v) {
  RationalVector out;
  out.reserve(static_cast<std::size_t>(v.size()));
  Rational total = 0;
  for (Index i = 0; i < v.size(); ++i) {
    out.emplace_back(v(i) > 0.0 ? v(i) : 0.0);
    total += out.back();
  }
  if (total == 0) throw std::invalid_argument("cannot normalize an all-zero strategy");
  for (auto& e : out) e /= total;
  return out;
}

inline RationalProfile to_rational_profile(const MixedProfile& p) {
  return {to_rational_distribution(p.x), to_rational_distribution(p.y)};
}

inline MixedProfile to_double(const RationalProfile& p) {
  MixedProfile out{Vector(static_cast<Index>(p.x.size())), Vector(static_cast<Index>(p.y.size()))};
  for (std::size_t i = 0; i < p.x.size(); ++i) out.x(static_cast<Index>(i)) = p.x[i].get_d();
  for (std::size_t j = 0; j < p.y.size(); ++j) out.y(static_cast<Index>(j)) = p.y[j].get_d();
  return out;
}

}  // namespace bimatrix

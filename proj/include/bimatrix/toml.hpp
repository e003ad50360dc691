#pragma once

// Reader for the TOML subset used by benchmark configs: comments, bare and
// quoted keys, basic strings, integers, floats, booleans, single-line arrays
// of those, [table] and [[array-of-tables]] headers. Dotted keys, inline
// tables, multi-line strings and dates are rejected with an error.

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace bimatrix::toml {

struct ParseError : std::runtime_error {
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what) {}
};

struct Value;
using Array = std::vector<Value>;

struct Value {
  std::variant<std::string, long long, double, bool, Array> v;

  bool is_string() const { return std::holds_alternative<std::string>(v); }
  bool is_integer() const { return std::holds_alternative<long long>(v); }
  bool is_number() const { return is_integer() || std::holds_alternative<double>(v); }
  bool is_bool() const { return std::holds_alternative<bool>(v); }
  bool is_array() const { return std::holds_alternative<Array>(v); }

  const std::string& as_string() const { return std::get<std::string>(v); }
  long long as_integer() const { return std::get<long long>(v); }
  double as_number() const {
    return is_integer() ? static_cast<double>(std::get<long long>(v)) : std::get<double>(v);
  }
  bool as_bool() const { return std::get<bool>(v); }
  const Array& as_array() const { return std::get<Array>(v); }
};

class Table {
 public:
  bool contains(const std::string& key) const { return values_.count(key) != 0; }
  const Value* find(const std::string& key) const {
    const auto it = values_.find(key);
    return it == values_.end() ? nullptr : &it->second;
  }
  const Value& at(const std::string& key) const {
    if (const Value* v = find(key)) return *v;
    throw std::out_of_range("missing key: " + key);
  }
  void set(const std::string& key, Value v, int line) {
    if (!values_.emplace(key, std::move(v)).second) throw ParseError(line, "duplicate key '" + key + "'");
  }
  const std::map<std::string, Value>& values() const { return values_; }

  std::string get_string(const std::string& key, std::string fallback) const {
    const Value* v = find(key);
    if (!v) return fallback;
    if (!v->is_string()) throw std::invalid_argument("key '" + key + "' must be a string");
    return v->as_string();
  }
  double get_number(const std::string& key, double fallback) const {
    const Value* v = find(key);
    if (!v) return fallback;
    if (!v->is_number()) throw std::invalid_argument("key '" + key + "' must be a number");
    return v->as_number();
  }
  long long get_integer(const std::string& key, long long fallback) const {
    const Value* v = find(key);
    if (!v) return fallback;
    if (!v->is_integer()) throw std::invalid_argument("key '" + key + "' must be an integer");
    return v->as_integer();
  }
  bool get_bool(const std::string& key, bool fallback) const {
    const Value* v = find(key);
    if (!v) return fallback;
    if (!v->is_bool()) throw std::invalid_argument("key '" + key + "' must be a boolean");
    return v->as_bool();
  }

 private:
  std::map<std::string, Value> values_;
};

struct Document {
  Table root;
  std::map<std::string, Table> tables;
  std::map<std::string, std::vector<Table>> table_arrays;

  const std::vector<Table>& array(const std::string& name) const {
    static const std::vector<Table> empty;
    const auto it = table_arrays.find(name);
    return it == table_arrays.end() ? empty : it->second;
  }
};

namespace detail {

class Cursor {
 public:
  Cursor(const std::string& s, int line) : s_(s), line_(line) {}

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }
  bool at_end_or_comment() {
    skip_ws();
    return pos_ >= s_.size() || s_[pos_] == '#';
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  bool consume(char c) {
    skip_ws();
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_, what); }

  std::string key() {
    skip_ws();
    if (peek() == '"') return basic_string();
    std::string k;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '-'))
      k += s_[pos_++];
    if (k.empty()) fail("expected a key");
    skip_ws();
    if (peek() == '.') fail("dotted keys are not supported");
    return k;
  }

  std::string basic_string() {
    if (s_.compare(pos_, 3, "\"\"\"") == 0) fail("multi-line strings are not supported");
    ++pos_;  // opening quote
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      char c = s_[pos_++];
      if (c == '\\') {
        if (pos_ >= s_.size()) fail("unterminated escape");
        const char e = s_[pos_++];
        switch (e) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case '\\': c = '\\'; break;
          case '"': c = '"'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
      }
      out += c;
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }

  std::string literal_string() {
    ++pos_;
    const auto end = s_.find('\'', pos_);
    if (end == std::string::npos) fail("unterminated string");
    std::string out = s_.substr(pos_, end - pos_);
    pos_ = end + 1;
    return out;
  }

  Value value() {
    skip_ws();
    const char c = peek();
    if (c == '"') return {basic_string()};
    if (c == '\'') return {literal_string()};
    if (c == '[') {
      ++pos_;
      Array arr;
      skip_ws();
      if (consume(']')) return {arr};
      for (;;) {
        arr.push_back(value());
        if (consume(',')) {
          if (consume(']')) break;  // trailing comma
          continue;
        }
        expect(']');
        break;
      }
      return {arr};
    }
    if (c == '{') fail("inline tables are not supported");
    std::string tok;
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' && s_[pos_] != '#' &&
           s_[pos_] != ' ' && s_[pos_] != '\t')
      tok += s_[pos_++];
    if (tok == "true") return {true};
    if (tok == "false") return {false};
    std::string clean;
    for (char ch : tok)
      if (ch != '_') clean += ch;
    if (clean.empty()) fail("expected a value");
    char* end = nullptr;
    const bool looks_float = clean.find_first_of(".eE") != std::string::npos || clean == "inf" ||
                             clean == "+inf" || clean == "-inf" || clean == "nan";
    if (!looks_float) {
      const long long iv = std::strtoll(clean.c_str(), &end, 10);
      if (*end == '\0') return {iv};
    }
    const double dv = std::strtod(clean.c_str(), &end);
    if (*end != '\0') fail("cannot parse value '" + tok + "'");
    return {dv};
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
  int line_;
};

}  // namespace detail

inline Document parse(std::istream& in) {
  Document doc;
  Table* current = &doc.root;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    detail::Cursor cur(line, lineno);
    if (cur.at_end_or_comment()) continue;
    if (cur.consume('[')) {
      const bool array = cur.consume('[');
      const std::string name = cur.key();
      cur.expect(']');
      if (array) cur.expect(']');
      if (!cur.at_end_or_comment()) cur.fail("unexpected text after table header");
      if (array) {
        auto& vec = doc.table_arrays[name];
        vec.emplace_back();
        current = &vec.back();
      } else {
        if (doc.tables.count(name)) cur.fail("table [" + name + "] defined twice");
        current = &doc.tables[name];
      }
      continue;
    }
    const std::string key = cur.key();
    cur.expect('=');
    Value v = cur.value();
    if (!cur.at_end_or_comment()) cur.fail("unexpected text after value");
    current->set(key, std::move(v), lineno);
  }
  return doc;
}

inline Document parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

inline Document parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return parse(in);
}

}  // namespace bimatrix::toml

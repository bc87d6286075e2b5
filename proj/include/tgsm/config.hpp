#pragma once

// Nested key-value configuration text:
//
//   # comment
//   name = "bar"
//   [mesh]
//   cells = [20]
//   [material.dissipation]
//   kind = "norm"
//   yield = 1.5
//
// Values are numbers, double-quoted strings, true/false, or arrays of values
// (arrays may span lines). Keys are stored with their full dotted section path.

#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace tgsm::config {

struct Value {
  using Array = std::vector<Value>;
  std::variant<double, std::string, bool, Array> data;
  int line = 0;
  int column = 0;

  bool is_number() const { return std::holds_alternative<double>(data); }
  bool is_string() const { return std::holds_alternative<std::string>(data); }
  bool is_bool() const { return std::holds_alternative<bool>(data); }
  bool is_array() const { return std::holds_alternative<Array>(data); }

  double number() const;
  const std::string& string() const;
  bool boolean() const;
  const Array& array() const;
  /// Flattened numeric array (nested arrays concatenated row by row).
  std::vector<double> numbers() const;
};

class Document {
 public:
  bool has(const std::string& key) const { return values_.count(key) > 0; }
  /// Throws std::out_of_range naming the key when missing; typed accessors throw
  /// ParseError at the value position on a type mismatch.
  const Value& at(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  std::string string(const std::string& key, const std::string& fallback) const;
  bool boolean(const std::string& key, bool fallback) const;

  void set(const std::string& key, Value v) { values_[key] = std::move(v); }
  const std::map<std::string, Value>& values() const { return values_; }
  /// Keys never read through at/number/string/boolean.
  std::vector<std::string> unused_keys() const;

 private:
  std::map<std::string, Value> values_;
  mutable std::set<std::string> used_;
};

/// Throws ParseError with 1-based line and column.
Document parse(const std::string& text);
Document parse_file(const std::string& path);

}  // namespace tgsm::config

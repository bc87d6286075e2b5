#include "tgsm/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "tgsm/errors.hpp"

namespace tgsm::config {

namespace {

[[noreturn]] void type_error(const Value& v, const char* want) {
  throw ParseError(std::string("expected ") + want, v.line, v.column);
}

void flatten(const Value& v, std::vector<double>& out) {
  if (v.is_number()) {
    out.push_back(v.number());
  } else if (v.is_array()) {
    for (const Value& e : v.array()) flatten(e, out);
  } else {
    type_error(v, "a number or array of numbers");
  }
}

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  Document run() {
    Document doc;
    std::string section;
    while (true) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        advance();
        skip_spaces();
        std::string name = dotted_key();
        skip_spaces();
        expect(']');
        section = name;
        end_of_line();
        continue;
      }
      const int kl = line_, kc = col_;
      std::string key = dotted_key();
      skip_spaces();
      expect('=');
      skip_spaces();
      Value v = value();
      end_of_line();
      const std::string full = section.empty() ? key : section + "." + key;
      if (doc.has(full)) throw ParseError("duplicate key '" + full + "'", kl, kc);
      doc.set(full, std::move(v));
    }
    return doc;
  }

 private:
  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return eof() ? '\0' : s_[pos_]; }
  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    advance();
  }
  void skip_spaces() {
    while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) advance();
  }
  void skip_comment() {
    if (peek() == '#')
      while (!eof() && peek() != '\n') advance();
  }
  // Whitespace, newlines and comments (inside arrays and between statements).
  void skip_blank_lines() {
    while (!eof()) {
      skip_spaces();
      skip_comment();
      if (peek() == '\n') {
        advance();
      } else {
        break;
      }
    }
  }
  void end_of_line() {
    skip_spaces();
    skip_comment();
    if (eof()) return;
    if (peek() != '\n') fail("unexpected text after value");
    advance();
  }
  std::string dotted_key() {
    std::string out;
    while (!eof()) {
      const char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.') {
        out += c;
        advance();
      } else {
        break;
      }
    }
    if (out.empty() || out.front() == '.' || out.back() == '.' || out.find("..") != std::string::npos)
      fail("expected a key");
    return out;
  }
  Value value() {
    Value v;
    v.line = line_;
    v.column = col_;
    const char c = peek();
    if (c == '"') {
      v.data = quoted();
    } else if (c == '[') {
      advance();
      Value::Array arr;
      skip_blank_lines();
      if (peek() == ']') {
        advance();
        v.data = std::move(arr);
        return v;
      }
      while (true) {
        skip_blank_lines();
        if (eof()) fail("unterminated array");
        arr.push_back(value());
        skip_blank_lines();
        if (peek() == ',') {
          advance();
          skip_blank_lines();
          if (peek() == ']') {
            advance();
            break;
          }
          continue;
        }
        if (peek() == ']') {
          advance();
          break;
        }
        fail("expected ',' or ']' in array");
      }
      v.data = std::move(arr);
    } else if (s_.compare(pos_, 4, "true") == 0) {
      for (int i = 0; i < 4; ++i) advance();
      v.data = true;
    } else if (s_.compare(pos_, 5, "false") == 0) {
      for (int i = 0; i < 5; ++i) advance();
      v.data = false;
    } else {
      std::size_t end = pos_;
      while (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '.' ||
                                 s_[end] == '+' || s_[end] == '-'))
        ++end;
      double d = 0.0;
      const char* first = s_.data() + pos_;
      const char* last = s_.data() + end;
      if (first != last && *first == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, last, d);
      if (ec != std::errc() || ptr != last || first == last) fail("invalid value");
      while (pos_ < end) advance();
      v.data = d;
    }
    return v;
  }
  std::string quoted() {
    expect('"');
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      char c = peek();
      advance();
      if (c == '"') break;
      if (c == '\\') {
        if (eof()) fail("unterminated string");
        const char e = peek();
        advance();
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: fail(std::string("unknown escape \\") + e);
        }
        continue;
      }
      out += c;
    }
    return out;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

double Value::number() const {
  if (!is_number()) type_error(*this, "a number");
  return std::get<double>(data);
}

const std::string& Value::string() const {
  if (!is_string()) type_error(*this, "a string");
  return std::get<std::string>(data);
}

bool Value::boolean() const {
  if (!is_bool()) type_error(*this, "true or false");
  return std::get<bool>(data);
}

const Value::Array& Value::array() const {
  if (!is_array()) type_error(*this, "an array");
  return std::get<Array>(data);
}

std::vector<double> Value::numbers() const {
  std::vector<double> out;
  flatten(*this, out);
  return out;
}

const Value& Document::at(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw std::out_of_range("missing key '" + key + "'");
  used_.insert(key);
  return it->second;
}

double Document::number(const std::string& key, double fallback) const {
  return has(key) ? at(key).number() : fallback;
}

std::string Document::string(const std::string& key, const std::string& fallback) const {
  return has(key) ? at(key).string() : fallback;
}

bool Document::boolean(const std::string& key, bool fallback) const {
  return has(key) ? at(key).boolean() : fallback;
}

std::vector<std::string> Document::unused_keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_)
    if (!used_.count(k)) out.push_back(k);
  return out;
}

Document parse(const std::string& text) { return Parser(text).run(); }

Document parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

}  // namespace tgsm::config

#include "radsing/kv.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

namespace radsing::kv {

using nlohmann::json;

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  json document() {
    json root = json::object();
    json* section = &root;
    while (true) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        ++i_;
        skip_ws();
        json* node = &root;
        while (true) {
          std::string k = key();
          if (!node->is_object()) fail("section path crosses a non-table value");
          if (!node->contains(k)) (*node)[k] = json::object();
          node = &(*node)[k];
          skip_ws();
          if (peek() == '.') {
            ++i_;
            skip_ws();
            continue;
          }
          break;
        }
        expect(']');
        if (!node->is_object()) fail("section redefines a value");
        section = node;
        end_of_line();
        continue;
      }
      std::string k = key();
      skip_ws();
      expect('=');
      skip_ws();
      json v = value();
      if (section->contains(k)) fail("duplicate key '" + k + "'");
      (*section)[k] = std::move(v);
      end_of_line();
    }
    return root;
  }

  json single() {
    skip_space_and_newlines();
    json v = value();
    skip_space_and_newlines();
    if (!eof()) fail("trailing characters after value");
    return v;
  }

 private:
  std::string_view s_;
  size_t i_ = 0;
  int line_ = 1;

  bool eof() const { return i_ >= s_.size(); }
  char peek() const { return eof() ? '\0' : s_[i_]; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(line_, "line " + std::to_string(line_) + ": " + msg);
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++i_;
  }
  void skip_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) ++i_;
  }
  void skip_comment() {
    if (peek() == '#')
      while (!eof() && peek() != '\n') ++i_;
  }
  void skip_space_and_newlines() {
    while (true) {
      skip_ws();
      skip_comment();
      if (peek() == '\n') {
        ++i_;
        ++line_;
        continue;
      }
      break;
    }
  }
  void skip_blank_lines() { skip_space_and_newlines(); }
  void end_of_line() {
    skip_ws();
    skip_comment();
    if (eof()) return;
    if (peek() != '\n') fail("unexpected characters at end of line");
    ++i_;
    ++line_;
  }

  std::string key() {
    if (peek() == '"') return string_literal();
    size_t start = i_;
    while (!eof()) {
      char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')
        ++i_;
      else
        break;
    }
    if (i_ == start) fail("expected a key");
    return std::string(s_.substr(start, i_ - start));
  }

  std::string string_literal() {
    expect('"');
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      char c = s_[i_++];
      if (c == '"') break;
      if (c == '\\') {
        if (eof()) fail("unterminated escape");
        char e = s_[i_++];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '\\': out += '\\'; break;
          case '"': out += '"'; break;
          default: fail(std::string("unknown escape \\") + e);
        }
        continue;
      }
      out += c;
    }
    return out;
  }

  json value() {
    char c = peek();
    if (c == '"') return string_literal();
    if (c == '{') return inline_table();
    if (c == '[') return array();
    size_t start = i_;
    while (!eof()) {
      char d = peek();
      if (d == ',' || d == '}' || d == ']' || d == '\n' || d == '#' || d == ' ' || d == '\t' || d == '\r') break;
      ++i_;
    }
    std::string_view tok = s_.substr(start, i_ - start);
    if (tok.empty()) fail("expected a value");
    if (tok == "true") return true;
    if (tok == "false") return false;
    return number(tok);
  }

  json number(std::string_view tok) {
    std::string_view body = tok;
    bool neg = false;
    if (!body.empty() && (body[0] == '+' || body[0] == '-')) {
      neg = body[0] == '-';
      body.remove_prefix(1);
    }
    if (body == "inf") return neg ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
    bool is_float = body.find_first_of(".eE") != std::string_view::npos;
    if (!is_float) {
      long long v = 0;
      auto r = std::from_chars(body.data(), body.data() + body.size(), v);
      if (r.ec == std::errc() && r.ptr == body.data() + body.size()) return neg ? -v : v;
    }
    double d = 0.0;
    auto r = std::from_chars(body.data(), body.data() + body.size(), d);
    if (r.ec != std::errc() || r.ptr != body.data() + body.size())
      fail("cannot parse value '" + std::string(tok) + "'");
    return neg ? -d : d;
  }

  json inline_table() {
    expect('{');
    json t = json::object();
    skip_space_and_newlines();
    if (peek() == '}') {
      ++i_;
      return t;
    }
    while (true) {
      skip_space_and_newlines();
      std::string k = key();
      skip_ws();
      expect('=');
      skip_ws();
      json v = value();
      if (t.contains(k)) fail("duplicate key '" + k + "'");
      t[k] = std::move(v);
      skip_space_and_newlines();
      if (peek() == ',') {
        ++i_;
        continue;
      }
      expect('}');
      return t;
    }
  }

  json array() {
    expect('[');
    json a = json::array();
    while (true) {
      skip_space_and_newlines();
      if (peek() == ']') {
        ++i_;
        return a;
      }
      a.push_back(value());
      skip_space_and_newlines();
      if (peek() == ',') {
        ++i_;
        continue;
      }
      expect(']');
      return a;
    }
  }
};

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

bool bare_key(const std::string& k) {
  if (k.empty()) return false;
  for (char c : k)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  return true;
}

std::string render_key(const std::string& k) { return bare_key(k) ? k : quote(k); }

}  // namespace

json parse(std::string_view text) { return Parser(text).document(); }
json parse_value(std::string_view text) { return Parser(text).single(); }

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string dump_inline(const json& v) {
  switch (v.type()) {
    case json::value_t::object: {
      if (v.empty()) return "{}";
      std::string out = "{ ";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ", ";
        first = false;
        out += render_key(it.key()) + " = " + dump_inline(it.value());
      }
      return out + " }";
    }
    case json::value_t::array: {
      std::string out = "[";
      for (size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + dump_inline(v[i]);
      return out + "]";
    }
    case json::value_t::string: return quote(v.get<std::string>());
    case json::value_t::boolean: return v.get<bool>() ? "true" : "false";
    case json::value_t::number_integer:
    case json::value_t::number_unsigned: return std::to_string(v.get<long long>());
    case json::value_t::number_float: return format_number(v.get<double>());
    default: return "\"\"";
  }
}

std::string dump_document(const json& doc) {
  std::string out;
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (!it.value().is_object()) out += render_key(it.key()) + " = " + dump_inline(it.value()) + "\n";
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!it.value().is_object()) continue;
    out += (out.empty() ? "" : "\n") + std::string("[") + render_key(it.key()) + "]\n";
    for (auto jt = it.value().begin(); jt != it.value().end(); ++jt)
      out += render_key(jt.key()) + " = " + dump_inline(jt.value()) + "\n";
  }
  return out;
}

}  // namespace radsing::kv

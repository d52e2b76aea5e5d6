#include "kgnp/toml_lite.hpp"

#include <cctype>

#include "kgnp/error.hpp"
#include "kgnp/util.hpp"

namespace kgnp::toml {

const Value* Table::find(std::string_view key) const {
  for (std::size_t i = 0; i < keys_.size(); ++i)
    if (keys_[i] == key) return &values_[i];
  return nullptr;
}

Value* Table::find(std::string_view key) {
  for (std::size_t i = 0; i < keys_.size(); ++i)
    if (keys_[i] == key) return &values_[i];
  return nullptr;
}

Value& Table::insert(std::string key, Value value) {
  keys_.push_back(std::move(key));
  values_.push_back(std::move(value));
  return values_.back();
}

std::optional<std::string> Table::get_string(std::string_view key) const {
  const Value* v = find(key);
  if (!v) return std::nullopt;
  return v->as_string();
}

std::optional<double> Table::get_number(std::string_view key) const {
  const Value* v = find(key);
  if (!v) return std::nullopt;
  return v->as_number();
}

std::optional<std::int64_t> Table::get_integer(std::string_view key) const {
  const Value* v = find(key);
  if (!v) return std::nullopt;
  return v->as_integer();
}

std::optional<bool> Table::get_bool(std::string_view key) const {
  const Value* v = find(key);
  if (!v) return std::nullopt;
  return v->as_bool();
}

const Table* Table::get_table(std::string_view key) const {
  const Value* v = find(key);
  return v ? &v->as_table() : nullptr;
}

const std::vector<Value>* Table::get_array(std::string_view key) const {
  const Value* v = find(key);
  return v ? &v->as_array() : nullptr;
}

const std::string& Value::as_string() const {
  if (!is_string()) throw DataError("expected a string value");
  return std::get<std::string>(v_);
}

double Value::as_number() const {
  if (is_integer()) return static_cast<double>(std::get<std::int64_t>(v_));
  if (!std::holds_alternative<double>(v_)) throw DataError("expected a numeric value");
  return std::get<double>(v_);
}

std::int64_t Value::as_integer() const {
  if (!is_integer()) throw DataError("expected an integer value");
  return std::get<std::int64_t>(v_);
}

bool Value::as_bool() const {
  if (!is_bool()) throw DataError("expected a boolean value");
  return std::get<bool>(v_);
}

const Value::Array& Value::as_array() const {
  if (!is_array()) throw DataError("expected an array value");
  return std::get<Array>(v_);
}

Value::Array& Value::as_array() {
  if (!is_array()) throw DataError("expected an array value");
  return std::get<Array>(v_);
}

const Table& Value::as_table() const {
  if (!is_table()) throw DataError("expected a table value");
  return std::get<Table>(v_);
}

Table& Value::as_table() {
  if (!is_table()) throw DataError("expected a table value");
  return std::get<Table>(v_);
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::string_view source) : text_(text), source_(source) {}

  Table run() {
    Table root;
    Table* current = &root;
    for (;;) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        const bool array_of_tables = peek(1) == '[';
        pos_ += array_of_tables ? 2 : 1;
        auto path = parse_key_path();
        skip_inline_space();
        expect(']');
        if (array_of_tables) expect(']');
        end_of_line();
        current = array_of_tables ? &append_table(root, path) : &open_table(root, path);
        continue;
      }
      auto path = parse_key_path();
      skip_inline_space();
      expect('=');
      skip_inline_space();
      Value value = parse_value();
      end_of_line();
      assign(*current, path, std::move(value));
    }
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw DataError(std::string(source_) + ":" + std::to_string(line_) + ": " + message);
  }

  bool eof() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const { return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0'; }

  char get() {
    const char c = text_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    get();
  }

  void skip_inline_space() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) get();
  }

  void skip_comment() {
    if (peek() == '#')
      while (!eof() && peek() != '\n') get();
  }

  void skip_blank_lines() {
    for (;;) {
      skip_inline_space();
      skip_comment();
      if (peek() == '\r') get();
      if (peek() == '\n') {
        get();
        continue;
      }
      return;
    }
  }

  // Whitespace, newlines and comments inside arrays.
  void skip_layout() {
    for (;;) {
      skip_inline_space();
      skip_comment();
      if (peek() == '\n' || peek() == '\r') {
        get();
        continue;
      }
      return;
    }
  }

  void end_of_line() {
    skip_inline_space();
    skip_comment();
    if (peek() == '\r') get();
    if (eof()) return;
    if (peek() != '\n') fail("unexpected trailing characters");
    get();
  }

  std::string parse_key() {
    if (peek() == '"') return parse_basic_string();
    if (peek() == '\'') return parse_literal_string();
    std::string key;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-'))
      key += get();
    if (key.empty()) fail("expected a key");
    return key;
  }

  std::vector<std::string> parse_key_path() {
    skip_inline_space();
    std::vector<std::string> path{parse_key()};
    for (;;) {
      skip_inline_space();
      if (peek() != '.') return path;
      get();
      skip_inline_space();
      path.push_back(parse_key());
    }
  }

  std::string parse_basic_string() {
    expect('"');
    std::string out;
    for (;;) {
      if (eof() || peek() == '\n') fail("unterminated string");
      char c = get();
      if (c == '"') return out;
      if (c == '\\') {
        const char e = get();
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
        continue;
      }
      out += c;
    }
  }

  std::string parse_literal_string() {
    expect('\'');
    std::string out;
    for (;;) {
      if (eof() || peek() == '\n') fail("unterminated string");
      char c = get();
      if (c == '\'') return out;
      out += c;
    }
  }

  Value parse_value() {
    const char c = peek();
    if (c == '"') return parse_basic_string();
    if (c == '\'') return parse_literal_string();
    if (c == '[') return parse_array();
    if (c == '{') return parse_inline_table();
    std::string word;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '.' || peek() == '-' ||
                      peek() == '+' || peek() == '_'))
      word += get();
    if (word == "true") return true;
    if (word == "false") return false;
    if (word.empty()) fail("expected a value");
    std::string digits;
    for (char ch : word)
      if (ch != '_') digits += ch;
    const bool integral = digits.find_first_of(".eE") == std::string::npos && digits != "inf" && digits != "nan";
    if (integral) {
      try {
        std::size_t used = 0;
        const long long v = std::stoll(digits, &used);
        if (used == digits.size()) return static_cast<std::int64_t>(v);
      } catch (const std::exception&) {
      }
      fail("malformed integer '" + word + "'");
    }
    if (auto v = parse_number(digits)) return *v;
    fail("malformed value '" + word + "'");
  }

  Value parse_array() {
    expect('[');
    Value::Array items;
    for (;;) {
      skip_layout();
      if (peek() == ']') {
        get();
        return items;
      }
      items.push_back(parse_value());
      skip_layout();
      if (peek() == ',') {
        get();
        continue;
      }
      if (peek() != ']') fail("expected ',' or ']' in array");
    }
  }

  Value parse_inline_table() {
    expect('{');
    Table table;
    skip_inline_space();
    if (peek() == '}') {
      get();
      return table;
    }
    for (;;) {
      auto path = parse_key_path();
      skip_inline_space();
      expect('=');
      skip_inline_space();
      assign(table, path, parse_value());
      skip_inline_space();
      if (peek() == ',') {
        get();
        skip_inline_space();
        continue;
      }
      expect('}');
      return table;
    }
  }

  Table& descend(Table& from, const std::string& key) {
    Value* v = from.find(key);
    if (!v) return from.insert(key, Table{}).as_table();
    if (v->is_table()) return v->as_table();
    if (v->is_array() && !v->as_array().empty() && v->as_array().back().is_table())
      return v->as_array().back().as_table();
    fail("key '" + key + "' is not a table");
  }

  Table& open_table(Table& root, const std::vector<std::string>& path) {
    Table* t = &root;
    for (const auto& key : path) t = &descend(*t, key);
    return *t;
  }

  Table& append_table(Table& root, const std::vector<std::string>& path) {
    Table* t = &root;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) t = &descend(*t, path[i]);
    Value* v = t->find(path.back());
    if (!v) v = &t->insert(path.back(), Value::Array{});
    if (!v->is_array()) fail("key '" + path.back() + "' is not an array of tables");
    v->as_array().push_back(Table{});
    return v->as_array().back().as_table();
  }

  void assign(Table& table, const std::vector<std::string>& path, Value value) {
    Table* t = &table;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) t = &descend(*t, path[i]);
    if (t->find(path.back())) fail("duplicate key '" + path.back() + "'");
    t->insert(path.back(), std::move(value));
  }

  std::string_view text_;
  std::string_view source_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

}  // namespace

Table parse(std::string_view text, std::string_view source) { return Parser(text, source).run(); }

Table parse_file(const std::string& path) { return parse(read_file(path), path); }

}  // namespace kgnp::toml

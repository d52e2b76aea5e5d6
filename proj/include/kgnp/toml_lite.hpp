#pragma once

// Reader for the subset of TOML used by network, schema and training config
// files: tables, arrays of tables, dotted keys, strings, integers, floats,
// booleans, arrays and inline tables. Dates are not supported.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

namespace kgnp::toml {

class Value;

class Table {
 public:
  const Value* find(std::string_view key) const;
  Value* find(std::string_view key);
  Value& insert(std::string key, Value value);
  const std::vector<std::string>& keys() const { return keys_; }
  std::size_t size() const { return keys_.size(); }

  std::optional<std::string> get_string(std::string_view key) const;
  std::optional<double> get_number(std::string_view key) const;
  std::optional<std::int64_t> get_integer(std::string_view key) const;
  std::optional<bool> get_bool(std::string_view key) const;
  const Table* get_table(std::string_view key) const;
  const std::vector<Value>* get_array(std::string_view key) const;

 private:
  std::vector<std::string> keys_;
  std::vector<Value> values_;
};

class Value {
 public:
  using Array = std::vector<Value>;
  using Storage = std::variant<std::string, std::int64_t, double, bool, Array, Table>;

  Value() : v_(std::string{}) {}
  template <typename T>
    requires std::is_constructible_v<Storage, T> && (!std::is_same_v<std::remove_cvref_t<T>, Value>)
  Value(T v) : v_(std::move(v)) {}

  bool is_string() const { return std::holds_alternative<std::string>(v_); }
  bool is_integer() const { return std::holds_alternative<std::int64_t>(v_); }
  bool is_number() const { return is_integer() || std::holds_alternative<double>(v_); }
  bool is_bool() const { return std::holds_alternative<bool>(v_); }
  bool is_array() const { return std::holds_alternative<Array>(v_); }
  bool is_table() const { return std::holds_alternative<Table>(v_); }

  const std::string& as_string() const;
  double as_number() const;
  std::int64_t as_integer() const;
  bool as_bool() const;
  const Array& as_array() const;
  Array& as_array();
  const Table& as_table() const;
  Table& as_table();

 private:
  Storage v_;
};

/// Throws DataError naming `source` and the line on malformed input.
Table parse(std::string_view text, std::string_view source = "<toml>");
Table parse_file(const std::string& path);

}  // namespace kgnp::toml

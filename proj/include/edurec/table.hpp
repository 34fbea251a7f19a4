#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace edurec {

enum class AttributeKind { categorical, numeric };

struct Attribute {
  std::string name;
  AttributeKind kind = AttributeKind::numeric;

  friend bool operator==(const Attribute&, const Attribute&) = default;
};

using Schema = std::vector<Attribute>;

// One attribute value: a category token or a real number.
using Value = std::variant<std::string, double>;
using Row = std::vector<Value>;

// Generic labeled feature table consumed by the classifiers.
struct Table {
  Schema attributes;
  std::vector<Row> rows;
  std::vector<std::string> labels;

  std::size_t size() const noexcept { return rows.size(); }
  bool empty() const noexcept { return rows.empty(); }
};

class SchemaMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Throws SchemaMismatch when `row` has the wrong arity or a value whose
// kind disagrees with the attribute.
void check_row(const Schema& schema, const Row& row);

// Throws SchemaMismatch on a malformed table (ragged rows, label count).
void check_table(const Table& table);

const char* to_string(AttributeKind kind) noexcept;
AttributeKind attribute_kind_from_string(const std::string& s);

}  // namespace edurec

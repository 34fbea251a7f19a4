#include "edurec/table.hpp"

namespace edurec {

void check_row(const Schema& schema, const Row& row) {
  if (row.size() != schema.size()) {
    throw SchemaMismatch("row has " + std::to_string(row.size()) +
                         " values, schema has " +
                         std::to_string(schema.size()) + " attributes");
  }
  for (std::size_t i = 0; i < row.size(); ++i) {
    const bool numeric = std::holds_alternative<double>(row[i]);
    if (numeric != (schema[i].kind == AttributeKind::numeric)) {
      throw SchemaMismatch("attribute '" + schema[i].name + "' expects a " +
                           to_string(schema[i].kind) + " value");
    }
  }
}

void check_table(const Table& table) {
  if (table.labels.size() != table.rows.size()) {
    throw SchemaMismatch("label count does not match row count");
  }
  for (const auto& row : table.rows) check_row(table.attributes, row);
}

const char* to_string(AttributeKind kind) noexcept {
  return kind == AttributeKind::numeric ? "numeric" : "categorical";
}

AttributeKind attribute_kind_from_string(const std::string& s) {
  if (s == "numeric") return AttributeKind::numeric;
  if (s == "categorical") return AttributeKind::categorical;
  throw std::invalid_argument("unknown attribute kind '" + s + "'");
}

}  // namespace edurec

#include "overgfm/types.hpp"

#include <cmath>
#include <sstream>

namespace overgfm {

const char* to_string(VarKind kind) {
  switch (kind) {
    case VarKind::continuous: return "continuous";
    case VarKind::count: return "count";
    case VarKind::binomial: return "binomial";
  }
  return "?";
}

VarKind parse_var_kind(const std::string& text) {
  if (text == "continuous") return VarKind::continuous;
  if (text == "count") return VarKind::count;
  if (text == "binomial") return VarKind::binomial;
  throw DataError("unknown variable kind '" + text + "'");
}

arma::uvec VariableSchema::indices_of(VarKind kind) const {
  std::vector<arma::uword> idx;
  for (arma::uword j = 0; j < columns.size(); ++j)
    if (columns[j].kind == kind) idx.push_back(j);
  return arma::uvec(idx);
}

arma::uvec VariableSchema::site_columns() const {
  std::vector<arma::uword> idx;
  for (arma::uword j = 0; j < columns.size(); ++j)
    if (columns[j].kind != VarKind::continuous) idx.push_back(j);
  return arma::uvec(idx);
}

void VariableSchema::check() const {
  if (columns.empty()) throw DataError("schema has no columns");
  for (arma::uword j = 0; j < columns.size(); ++j) {
    const ColumnSpec& c = columns[j];
    if (c.name.empty())
      throw DataError("schema column " + std::to_string(j + 1) + " has no name");
    if (c.kind == VarKind::binomial && c.trials < 1)
      throw DataError("schema column '" + c.name + "': binomial trials must be >= 1");
  }
}

namespace {

[[noreturn]] void entry_error(const VariableSchema& schema, arma::uword i, arma::uword j,
                              const char* what) {
  std::ostringstream os;
  os << "column " << (j + 1) << " ('" << schema.columns[j].name << "') row " << (i + 1) << ": "
     << what;
  throw DataError(os.str());
}

bool is_integer(double v) { return std::isfinite(v) && v == std::floor(v); }

}  // namespace

CheckedData validate(MixedDataMatrix data, VariableSchema schema) {
  schema.check();
  const arma::uword n = data.n();
  const arma::uword p = data.p();
  if (p != schema.p())
    throw DataError("data has " + std::to_string(p) + " columns but schema lists " +
                    std::to_string(schema.p()));
  if (n < 2) throw DataError("need at least 2 rows");
  if (p < 1) throw DataError("need at least 1 column");

  if (data.offsets.empty()) {
    data.offsets.zeros(n);
  } else if (data.offsets.n_elem != n) {
    throw DataError("offsets length " + std::to_string(data.offsets.n_elem) +
                    " does not match " + std::to_string(n) + " rows");
  } else if (!data.offsets.is_finite()) {
    throw DataError("offsets contain a non-finite value");
  }

  for (arma::uword j = 0; j < p; ++j) {
    const ColumnSpec& c = schema.columns[j];
    for (arma::uword i = 0; i < n; ++i) {
      const double v = data.X(i, j);
      if (!std::isfinite(v)) entry_error(schema, i, j, "non-finite value");
      switch (c.kind) {
        case VarKind::continuous:
          break;
        case VarKind::count:
          if (!is_integer(v) || v < 0.0) entry_error(schema, i, j, "non-integer count");
          break;
        case VarKind::binomial:
          if (!is_integer(v)) entry_error(schema, i, j, "non-integer binomial entry");
          if (v < 0.0 || v > static_cast<double>(c.trials))
            entry_error(schema, i, j, "exceeds trials");
          break;
      }
    }
  }

  CheckedData ds;
  ds.g1 = schema.indices_of(VarKind::continuous);
  ds.g2 = schema.indices_of(VarKind::count);
  ds.g3 = schema.indices_of(VarKind::binomial);
  ds.sites = schema.site_columns();
  ds.data = std::move(data);
  ds.schema = std::move(schema);
  return ds;
}

}  // namespace overgfm

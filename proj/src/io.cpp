#include "overgfm/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

namespace overgfm {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double_at(std::string_view token, const fs::path& path, std::size_t line) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    std::ostringstream os;
    os << path.string() << ":" << line << ": cannot parse number '" << std::string(token) << "'";
    throw DataError(os.str());
  }
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

}  // namespace

void write_text_atomic(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    out << text;
    if (!out.flush()) throw DataError("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

void save_matrix_csv(const fs::path& path, const arma::mat& M,
                     const std::vector<std::string>& header) {
  if (header.size() != M.n_cols)
    throw std::invalid_argument("header size does not match column count");
  std::ostringstream os;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j) os << ',';
    os << header[j];
  }
  os << '\n';
  for (arma::uword i = 0; i < M.n_rows; ++i) {
    for (arma::uword j = 0; j < M.n_cols; ++j) {
      if (j) os << ',';
      os << format_double(M(i, j));
    }
    os << '\n';
  }
  write_text_atomic(path, os.str());
}

void save_matrix_csv(const fs::path& path, const arma::mat& M, const std::string& stem) {
  std::vector<std::string> header(M.n_cols);
  for (arma::uword j = 0; j < M.n_cols; ++j) header[j] = stem + std::to_string(j + 1);
  save_matrix_csv(path, M, header);
}

arma::mat load_matrix_csv(const fs::path& path, std::vector<std::string>* header) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw DataError(path.string() + ":1: missing header row");
  const std::vector<std::string> head = split_csv(lines[0]);
  const std::size_t p = head.size();
  if (header) *header = head;
  arma::mat M(lines.size() - 1, p);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const std::vector<std::string> cells = split_csv(lines[r]);
    if (cells.size() != p) {
      std::ostringstream os;
      os << path.string() << ":" << (r + 1) << ": expected " << p << " cells, found "
         << cells.size();
      throw DataError(os.str());
    }
    for (std::size_t j = 0; j < p; ++j) M(r - 1, j) = parse_double_at(cells[j], path, r + 1);
  }
  return M;
}

void save_vector_csv(const fs::path& path, const arma::vec& v, const std::string& name) {
  save_matrix_csv(path, arma::mat(v), std::vector<std::string>{name});
}

arma::vec load_vector_csv(const fs::path& path) {
  arma::mat M = load_matrix_csv(path);
  if (M.n_cols != 1)
    throw DataError(path.string() + ": expected a single column, found " +
                    std::to_string(M.n_cols));
  return M.col(0);
}

void save_schema(const fs::path& path, const VariableSchema& schema) {
  std::ostringstream os;
  os << "name,kind,trials\n";
  for (const ColumnSpec& c : schema.columns) {
    os << c.name << ',' << to_string(c.kind) << ',';
    if (c.kind == VarKind::binomial) os << c.trials;
    os << '\n';
  }
  write_text_atomic(path, os.str());
}

VariableSchema load_schema(const fs::path& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty() || split_csv(lines[0]) != std::vector<std::string>{"name", "kind", "trials"})
    throw DataError(path.string() + ":1: expected header 'name,kind,trials'");
  VariableSchema schema;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const std::vector<std::string> cells = split_csv(lines[r]);
    if (cells.size() != 3) {
      std::ostringstream os;
      os << path.string() << ":" << (r + 1) << ": expected 3 cells, found " << cells.size();
      throw DataError(os.str());
    }
    ColumnSpec c;
    c.name = cells[0];
    try {
      c.kind = parse_var_kind(cells[1]);
    } catch (const DataError& e) {
      std::ostringstream os;
      os << path.string() << ":" << (r + 1) << ": " << e.what();
      throw DataError(os.str());
    }
    if (c.kind == VarKind::binomial) {
      if (cells[2].empty()) {
        std::ostringstream os;
        os << path.string() << ":" << (r + 1) << ": binomial column needs trials";
        throw DataError(os.str());
      }
      c.trials = static_cast<long long>(parse_double_at(cells[2], path, r + 1));
    } else if (!cells[2].empty()) {
      std::ostringstream os;
      os << path.string() << ":" << (r + 1) << ": trials given for a non-binomial column";
      throw DataError(os.str());
    }
    schema.columns.push_back(std::move(c));
  }
  schema.check();
  return schema;
}

void save_offsets(const fs::path& path, const arma::vec& offsets) {
  std::ostringstream os;
  for (arma::uword i = 0; i < offsets.n_elem; ++i) os << format_double(offsets(i)) << '\n';
  write_text_atomic(path, os.str());
}

arma::vec load_offsets(const fs::path& path) {
  const std::vector<std::string> lines = read_lines(path);
  arma::vec v(lines.size());
  for (std::size_t r = 0; r < lines.size(); ++r) v(r) = parse_double_at(lines[r], path, r + 1);
  return v;
}

void save_data_csv(const fs::path& path, const MixedDataMatrix& data,
                   const VariableSchema& schema) {
  std::vector<std::string> header;
  header.reserve(schema.columns.size());
  for (const ColumnSpec& c : schema.columns) header.push_back(c.name);
  save_matrix_csv(path, data.X, header);
}

}  // namespace overgfm

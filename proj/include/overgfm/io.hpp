#pragma once

#include "overgfm/types.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace overgfm {

/// Shortest decimal rendering that parses back to the same double.
std::string format_double(double v);

/// Matrix files: comma-separated values with one header row; numeric cells
/// use format_double so a save/load round trip is lossless.
void save_matrix_csv(const std::filesystem::path& path, const arma::mat& M,
                     const std::vector<std::string>& header);
/// Header columns named stem1..stemK.
void save_matrix_csv(const std::filesystem::path& path, const arma::mat& M,
                     const std::string& stem);
/// Throws DataError with "path:line:" context on malformed input.
arma::mat load_matrix_csv(const std::filesystem::path& path,
                          std::vector<std::string>* header = nullptr);

void save_vector_csv(const std::filesystem::path& path, const arma::vec& v,
                     const std::string& name);
arma::vec load_vector_csv(const std::filesystem::path& path);

/// Schema files: records name,kind[,trials]; trials required iff binomial.
void save_schema(const std::filesystem::path& path, const VariableSchema& schema);
VariableSchema load_schema(const std::filesystem::path& path);

/// Offsets: one real per line, no header.
void save_offsets(const std::filesystem::path& path, const arma::vec& offsets);
arma::vec load_offsets(const std::filesystem::path& path);

/// Data files carry the schema column names as header.
void save_data_csv(const std::filesystem::path& path, const MixedDataMatrix& data,
                   const VariableSchema& schema);

/// Writes via a temp file in the same directory plus rename, so readers
/// never observe a partially written file.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace overgfm

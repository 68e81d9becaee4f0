#pragma once

#include <armadillo>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace overgfm {

/// Raised when observed data contradicts its declared schema or a fit
/// degenerates numerically. CLI maps this to the data-error exit code.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class VarKind { continuous, count, binomial };

const char* to_string(VarKind kind);
VarKind parse_var_kind(const std::string& text);

/// One observed column. `trials` is the binomial trial count n_j and is
/// ignored for the other kinds.
struct ColumnSpec {
  std::string name;
  VarKind kind = VarKind::continuous;
  long long trials = 1;
};

struct VariableSchema {
  std::vector<ColumnSpec> columns;

  arma::uword p() const { return columns.size(); }
  arma::uvec indices_of(VarKind kind) const;
  /// Count and binomial columns in schema order; tau/sigma2 columns align
  /// with this list.
  arma::uvec site_columns() const;
  /// Throws DataError on an invalid schema (empty, unnamed column, or a
  /// binomial column with trials < 1).
  void check() const;
};

struct MixedDataMatrix {
  arma::mat X;        // n x p observations
  arma::vec offsets;  // per-row offset a_i; empty means all zero

  arma::uword n() const { return X.n_rows; }
  arma::uword p() const { return X.n_cols; }
};

/// Dataset whose entries have been checked against the schema, with the
/// type index sets materialized. g1, g2, g3 partition {0..p-1}; offsets are
/// materialized to an explicit length-n vector.
struct CheckedData {
  MixedDataMatrix data;
  VariableSchema schema;
  arma::uvec g1;     // continuous columns
  arma::uvec g2;     // count columns
  arma::uvec g3;     // binomial columns
  arma::uvec sites;  // g2 ∪ g3 in schema order

  arma::uword n() const { return data.n(); }
  arma::uword p() const { return data.p(); }
};

/// Checks every entry against its column kind (counts must be nonnegative
/// integers, binomial entries integers in [0, n_j], everything finite) and
/// returns the dataset with index sets attached. Idempotent.
CheckedData validate(MixedDataMatrix data, VariableSchema schema);

struct ModelParams {
  arma::mat B;       // p x q loadings, rows b_j
  arma::vec mu;      // p intercepts
  arma::mat H;       // n x q factor scores, rows h_i
  arma::vec lambda;  // p dispersion variances, all >= lambda_floor
};

/// Variational posterior N(tau_ij, sigma2_ij) over the latent responses of
/// count and binomial sites; columns align with VariableSchema::site_columns.
struct VariationalParams {
  arma::mat tau;
  arma::mat sigma2;
};

struct FitConfig {
  arma::uword q = 1;
  arma::uword max_iter = 100;
  double eps_elbo = 1e-4;
  double lambda_floor = 1e-8;
  double exp_clamp = 80.0;
  std::optional<std::uint64_t> seed;  // reserved for optional random restarts
};

struct FitResult {
  ModelParams params;  // identifiability conditions applied
  std::vector<double> elbo_trace;
  arma::uword iterations = 0;
  bool converged = false;
  long long overflow_events = 0;  // clamped exponentials across the whole fit
  double init_seconds = 0.0;
  double loop_seconds = 0.0;
};

}  // namespace overgfm

#pragma once

#include "overgfm/types.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace overgfm {

enum class NoiseKind { gaussian, student_t };

/// Synthetic-data recipe. Column blocks are laid out in type_mix order and
/// rho carries one signal strength per block. The latent residual is
/// N(0, sigma2) per entry, or per-row multivariate t with t_df degrees of
/// freedom and shape matrix sigma2*I for the heavy-tailed variant.
struct SimSpec {
  arma::uword n = 0;
  arma::uword p = 0;
  arma::uword q = 0;
  std::vector<std::pair<VarKind, arma::uword>> type_mix;  // counts sum to p
  std::vector<double> rho;                                // one per block
  double sigma2 = 0.0;
  NoiseKind noise = NoiseKind::gaussian;
  double t_df = 1.0;
  double mu_scale = 0.4;
  long long trials = 1;  // n_j for binomial columns
  std::uint64_t seed = 0;

  void check() const;  // throws std::invalid_argument
};

struct SimulatedDataset {
  MixedDataMatrix data;
  VariableSchema schema;
  arma::mat H0;   // n x q, centered, H0'H0/n = I
  arma::mat B0;   // p x q, B0'B0 diagonal nonincreasing
  arma::vec mu0;  // p
  arma::mat Y0;   // n x p latent linear predictors
};

/// Draws standard-normal loadings scaled blockwise by rho, rotates the pair
/// into the canonical frame, draws AR(1)-correlated factors (corr 0.5^|k-l|),
/// intercepts mu_scale * N(0,1), the latent residual, and emits observations
/// per column kind: identity / Poisson(e^y) / Binomial(trials, g(y)).
/// Same seed, same platform: bitwise-identical output. Throws DataError when
/// a Poisson mean exceeds 1e12 (the message names the entry and advises a
/// smaller rho).
SimulatedDataset generate_dataset(const SimSpec& spec);

/// Sample variance over sample mean of a count column; above 1 indicates
/// overdispersion. Throws DataError on a zero-mean column.
double vmr(const arma::vec& counts);

namespace sim_detail {

/// Thin SVD Bbar = U2 L2 V2': returns (B0 = U2 L2, V2).
std::pair<arma::mat, arma::mat> canonical_loadings(const arma::mat& Bbar);

/// Centers the raw factor draws, orthonormalizes (Hbar'Hbar = I), and
/// rotates: H0 = sqrt(n) * Hbar * V2, so H0 B0' = sqrt(n) * Hbar * Bbar'.
arma::mat canonical_factors(const arma::mat& Hbreve, const arma::mat& V2);

}  // namespace sim_detail

}  // namespace overgfm

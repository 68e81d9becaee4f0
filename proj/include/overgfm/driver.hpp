#pragma once

#include "overgfm/types.hpp"

#include <utility>

namespace overgfm {

/// Spectral warm start: surrogate x~ = ln(1+x) on count columns (identity
/// elsewhere), mu0 = column means, rank-q SVD of the centered surrogate for
/// (H0, B0); tau0 = surrogate site values, sigma2_0 = 1, lambda0 = 1.
std::pair<ModelParams, VariationalParams> initialize(const CheckedData& ds, arma::uword q);

/// Rotates a fitted (B, mu, H) into the canonical frame: factor scores
/// centered with H'H/n = I_q, B'B diagonal nonincreasing, first nonzero
/// entry of each loading column positive, the centering absorbed into mu.
/// The fitted matrix H B' + 1 mu' is preserved exactly; idempotent.
ModelParams apply_identifiability(const ModelParams& params);

/// Full variational EM loop: initialize, then alternate e_step / m_step /
/// evaluate_elbo until the relative ELBO change drops below eps_elbo or
/// max_iter is reached; identifiability applied once afterwards.
FitResult fit(const CheckedData& ds, const FitConfig& config);

}  // namespace overgfm

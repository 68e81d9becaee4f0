#pragma once

#include "overgfm/types.hpp"

namespace overgfm {

/// Working response for the Gaussian-layer updates: observed values on
/// continuous columns, posterior means on the others, both offset-corrected;
/// posterior variances expanded to full width with zeros on continuous
/// columns.
struct EffectiveResponse {
  arma::mat xbar;         // n x p
  arma::mat sigma2_full;  // n x p
};

EffectiveResponse effective_response(const CheckedData& ds, const VariationalParams& vp);

/// b_j = (H'H)^{-1} sum_i h_i (xbar_ij - mu_j); one q x q factorization
/// shared across all p columns.
arma::mat update_loadings(const arma::mat& H, const arma::mat& xbar, const arma::vec& mu);

/// h_i = (B'L^{-1}B)^{-1} sum_j b_j (xbar_ij - mu_j)/lambda_j with
/// L = diag(lambda); one q x q factorization shared across all n rows.
arma::mat update_factors(const arma::mat& B, const arma::vec& lambda, const arma::mat& xbar,
                         const arma::vec& mu);

/// mu_j = mean_i (xbar_ij - b_j'h_i).
arma::vec update_intercepts(const arma::mat& B, const arma::mat& H, const arma::mat& xbar);

/// lambda_j = mean_i {(xbar_ij - b_j'h_i - mu_j)^2 + sigma2_ij}, floored.
arma::vec update_variances(const arma::mat& B, const arma::mat& H, const arma::vec& mu,
                           const arma::mat& xbar, const arma::mat& sigma2_full,
                           double lambda_floor);

/// Block-coordinate pass B, H, mu, lambda in that order, each block seeing
/// the freshest values of the others. Every block alone is an exact
/// coordinate maximizer of the bound.
ModelParams m_step(const CheckedData& ds, const ModelParams& params,
                   const VariationalParams& vp, const FitConfig& config);

}  // namespace overgfm

#pragma once

#include <armadillo>

#include <utility>

namespace overgfm {

/// Cholesky solve of the symmetric positive definite system S * X = rhs.
/// `what` names the offending matrix in the degeneracy error.
arma::mat solve_spd(const arma::mat& S, const arma::mat& rhs, const char* what);

/// Rank-q truncated SVD of a centered matrix Xc = U D V^T, returned as the
/// score/loading pair (sqrt(n)*U_q, V_q*D_q/sqrt(n)) whose product is the
/// best rank-q approximation of Xc.
std::pair<arma::mat, arma::mat> svd_score_loading(const arma::mat& Xc, arma::uword q);

}  // namespace overgfm

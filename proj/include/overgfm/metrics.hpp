#pragma once

#include "overgfm/types.hpp"

namespace overgfm {

/// Column-space overlap Tr(A0' P A0) / Tr(A0'A0) with P the orthogonal
/// projector onto the span of Ahat; 1 when the spans agree, 0 when
/// orthogonal, invariant to any invertible recombination of Ahat columns.
double trace_statistic(const arma::mat& Ahat, const arma::mat& A0);

/// Same statistic on the intercept-loading matrices [mu | B].
double trace_statistic_upsilon(const arma::mat& Bhat, const arma::vec& muhat,
                               const arma::mat& B0, const arma::vec& mu0);

/// Linear factor model baseline: column-mean intercepts plus the rank-q SVD
/// score/loading pair of the centered data.
struct LfmFit {
  arma::mat H;
  arma::mat B;
  arma::vec mu;
};

LfmFit fit_lfm(const arma::mat& X, arma::uword q);

}  // namespace overgfm

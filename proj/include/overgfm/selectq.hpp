#pragma once

#include "overgfm/types.hpp"

namespace overgfm {

/// Consecutive singular-value ratios of a fitted loading matrix.
/// ratios(k) = nu_k/nu_{k+1} (1-based k up to q_max-1). A denominator below
/// 1e-12*nu_1 with a live numerator yields +inf and wins the argmax at the
/// smallest such k; when both values are below the threshold the pair is
/// excluded (NaN) to avoid 0/0. q_hat is the smallest argmax.
struct SvrReport {
  arma::vec singular_values;  // length q_max, nonincreasing
  arma::vec ratios;           // length q_max - 1
  arma::uword q_hat = 1;
  double max_ratio = 0.0;
};

SvrReport singular_value_ratios(const arma::mat& B);

/// Fits at q = q_max and applies the ratio rule to the fitted loadings.
SvrReport select_num_factors(const CheckedData& ds, arma::uword q_max, FitConfig config);

}  // namespace overgfm

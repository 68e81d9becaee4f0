#include "overgfm/selectq.hpp"

#include "overgfm/driver.hpp"

#include <cmath>
#include <limits>

namespace overgfm {

SvrReport singular_value_ratios(const arma::mat& B) {
  SvrReport report;
  report.singular_values = arma::svd(B);
  const arma::uword k_max = report.singular_values.n_elem;
  if (k_max < 2) throw std::invalid_argument("need at least two singular values");
  if (report.singular_values(0) <= 0.0) throw DataError("zero loading matrix");

  const double threshold = 1e-12 * report.singular_values(0);
  const double inf = std::numeric_limits<double>::infinity();
  report.ratios.set_size(k_max - 1);

  bool found_infinite = false;
  double best = -inf;
  for (arma::uword k = 0; k + 1 < k_max; ++k) {
    const double num = report.singular_values(k);
    const double den = report.singular_values(k + 1);
    if (den < threshold) {
      if (num >= threshold) {
        report.ratios(k) = inf;
        if (!found_infinite) {
          found_infinite = true;
          report.q_hat = k + 1;
          report.max_ratio = inf;
        }
      } else {
        report.ratios(k) = arma::datum::nan;  // 0/0 pair, excluded
      }
    } else {
      report.ratios(k) = num / den;
      if (!found_infinite && report.ratios(k) > best) {
        best = report.ratios(k);
        report.q_hat = k + 1;
        report.max_ratio = best;
      }
    }
  }
  return report;
}

SvrReport select_num_factors(const CheckedData& ds, arma::uword q_max, FitConfig config) {
  if (q_max >= std::min(ds.n(), ds.p()))
    throw std::invalid_argument("q_max must be below min(n, p)");
  config.q = q_max;
  const FitResult full = fit(ds, config);
  return singular_value_ratios(full.params.B);
}

}  // namespace overgfm

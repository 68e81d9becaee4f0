#include "overgfm/metrics.hpp"

#include "overgfm/linalg.hpp"

#include <algorithm>

namespace overgfm {

double trace_statistic(const arma::mat& Ahat, const arma::mat& A0) {
  if (Ahat.n_rows != A0.n_rows)
    throw std::invalid_argument("trace statistic needs matching row counts");
  const double denom = arma::accu(arma::square(A0));
  if (!(denom > 0.0)) throw std::invalid_argument("reference matrix is zero");
  // Tr(A0' P A0) = ||Q'A0||_F^2 with P = QQ' the orthogonal projector onto
  // col(Ahat); the QR route keeps the error ~cond(Ahat) rather than its square.
  arma::mat Q, R;
  if (!arma::qr_econ(Q, R, Ahat)) throw DataError("rank-deficient estimate");
  const arma::vec d = arma::abs(R.diag());
  if (!(d.min() > 1e-12 * d.max())) throw DataError("rank-deficient estimate");
  const double value = arma::accu(arma::square(Q.t() * A0)) / denom;
  return std::min(value, 1.0);  // projection cannot exceed the full norm
}

double trace_statistic_upsilon(const arma::mat& Bhat, const arma::vec& muhat,
                               const arma::mat& B0, const arma::vec& mu0) {
  return trace_statistic(arma::join_rows(arma::mat(muhat), Bhat),
                         arma::join_rows(arma::mat(mu0), B0));
}

LfmFit fit_lfm(const arma::mat& X, arma::uword q) {
  if (q < 1 || q >= std::min(X.n_rows, X.n_cols))
    throw std::invalid_argument("q must satisfy 1 <= q < min(n, p)");
  LfmFit out;
  out.mu = arma::mean(X, 0).t();
  arma::mat Xc = X;
  Xc.each_row() -= out.mu.t();
  std::tie(out.H, out.B) = svd_score_loading(Xc, q);
  return out;
}

}  // namespace overgfm

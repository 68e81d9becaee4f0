#include "overgfm/linalg.hpp"

#include "overgfm/types.hpp"

#include <cmath>
#include <string>

namespace overgfm {

arma::mat solve_spd(const arma::mat& S, const arma::mat& rhs, const char* what) {
  arma::mat R;
  // general matrix products are symmetric only up to roundoff; chol wants exact
  if (!arma::chol(R, arma::symmatu(S))) throw DataError(std::string("degenerate ") + what);
  // S = R'R, so S x = b solves as two triangular sweeps
  return arma::solve(arma::trimatu(R), arma::solve(arma::trimatl(R.t()), rhs));
}

std::pair<arma::mat, arma::mat> svd_score_loading(const arma::mat& Xc, arma::uword q) {
  arma::mat U, V;
  arma::vec s;
  if (!arma::svd_econ(U, s, V, Xc)) throw DataError("svd failed on non-degenerate input");
  const double root_n = std::sqrt(static_cast<double>(Xc.n_rows));
  arma::mat H = root_n * U.cols(0, q - 1);
  arma::mat B = V.cols(0, q - 1) * arma::diagmat(s.head(q) / root_n);
  return {std::move(H), std::move(B)};
}

}  // namespace overgfm

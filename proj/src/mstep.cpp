#include "overgfm/mstep.hpp"

#include "overgfm/linalg.hpp"

namespace overgfm {

EffectiveResponse effective_response(const CheckedData& ds, const VariationalParams& vp) {
  EffectiveResponse er;
  er.xbar = ds.data.X;
  er.sigma2_full.zeros(ds.n(), ds.p());
  for (arma::uword c = 0; c < ds.sites.n_elem; ++c) {
    const arma::uword j = ds.sites(c);
    er.xbar.col(j) = vp.tau.col(c);
    er.sigma2_full.col(j) = vp.sigma2.col(c);
  }
  er.xbar.each_col() -= ds.data.offsets;
  return er;
}

arma::mat update_loadings(const arma::mat& H, const arma::mat& xbar, const arma::vec& mu) {
  arma::mat Xc = xbar;
  Xc.each_row() -= mu.t();
  return solve_spd(H.t() * H, H.t() * Xc, "factor scores").t();
}

arma::mat update_factors(const arma::mat& B, const arma::vec& lambda, const arma::mat& xbar,
                         const arma::vec& mu) {
  arma::mat Bw = B;
  Bw.each_col() /= lambda;  // rows scaled by 1/lambda_j
  arma::mat Xc = xbar;
  Xc.each_row() -= mu.t();
  return solve_spd(B.t() * Bw, Bw.t() * Xc.t(), "loadings").t();
}

arma::vec update_intercepts(const arma::mat& B, const arma::mat& H, const arma::mat& xbar) {
  return arma::mean(xbar - H * B.t(), 0).t();
}

arma::vec update_variances(const arma::mat& B, const arma::mat& H, const arma::vec& mu,
                           const arma::mat& xbar, const arma::mat& sigma2_full,
                           double lambda_floor) {
  arma::mat R = xbar - H * B.t();
  R.each_row() -= mu.t();
  arma::vec lam = arma::mean(arma::square(R) + sigma2_full, 0).t();
  return arma::clamp(lam, lambda_floor, arma::datum::inf);
}

ModelParams m_step(const CheckedData& ds, const ModelParams& params,
                   const VariationalParams& vp, const FitConfig& config) {
  const EffectiveResponse er = effective_response(ds, vp);
  ModelParams next = params;
  next.B = update_loadings(next.H, er.xbar, next.mu);
  next.H = update_factors(next.B, next.lambda, er.xbar, next.mu);
  next.mu = update_intercepts(next.B, next.H, er.xbar);
  next.lambda = update_variances(next.B, next.H, next.mu, er.xbar, er.sigma2_full,
                                 config.lambda_floor);
  return next;
}

}  // namespace overgfm

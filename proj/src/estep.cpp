#include "overgfm/estep.hpp"

#include "overgfm/parallel.hpp"

namespace overgfm {

SiteUpdate poisson_site_update(double x, double y0, double ztilde, double lambda,
                               double exp_clamp, long long& clamped) {
  const double inv_lam = 1.0 / lambda;
  const double ey0 = exp_clamped(y0, exp_clamp, clamped);
  const double tau = (x - ey0 * (1.0 - y0) + inv_lam * ztilde) / (inv_lam + ey0);
  const double sigma2 = 1.0 / (inv_lam + exp_clamped(tau, exp_clamp, clamped));
  return {tau, sigma2};
}

SiteUpdate binomial_site_update(double x, double n_trials, double y0, double ztilde,
                                double lambda, double exp_clamp, long long& clamped) {
  (void)exp_clamp;
  (void)clamped;  // the logistic saturates instead of overflowing
  const double inv_lam = 1.0 / lambda;
  const double g0 = sigmoid(y0);
  const double w0 = n_trials * g0 * (1.0 - g0);
  const double tau = (x - n_trials * g0 + y0 * w0 + inv_lam * ztilde) / (inv_lam + w0);
  const double gt = sigmoid(tau);
  const double sigma2 = 1.0 / (inv_lam + n_trials * gt * (1.0 - gt));
  return {tau, sigma2};
}

long long e_step(const CheckedData& ds, const ModelParams& params, VariationalParams& vp,
                 const FitConfig& config) {
  const arma::uword m = ds.sites.n_elem;
  if (m == 0) return 0;

  // linear predictors for the site columns only
  const arma::mat Bs = params.B.rows(ds.sites);
  const arma::mat Z = params.H * Bs.t();  // n x m
  const arma::vec& a = ds.data.offsets;
  const arma::uword n = ds.n();

  arma::Col<long long> clamped_by_col(m, arma::fill::zeros);
  parallel_chunks(m, [&](std::size_t first, std::size_t last) {
    for (std::size_t c = first; c < last; ++c) {
      const arma::uword j = ds.sites(c);
      const ColumnSpec& col = ds.schema.columns[j];
      const double mu_j = params.mu(j);
      const double lam_j = params.lambda(j);
      long long clamped = 0;
      if (col.kind == VarKind::count) {
        for (arma::uword i = 0; i < n; ++i) {
          const double ztilde = a(i) + mu_j + Z(i, c);
          const SiteUpdate s = poisson_site_update(ds.data.X(i, j), vp.tau(i, c), ztilde, lam_j,
                                                   config.exp_clamp, clamped);
          vp.tau(i, c) = s.tau;
          vp.sigma2(i, c) = s.sigma2;
        }
      } else {
        const double trials = static_cast<double>(col.trials);
        for (arma::uword i = 0; i < n; ++i) {
          const double ztilde = a(i) + mu_j + Z(i, c);
          const SiteUpdate s = binomial_site_update(ds.data.X(i, j), trials, vp.tau(i, c),
                                                    ztilde, lam_j, config.exp_clamp, clamped);
          vp.tau(i, c) = s.tau;
          vp.sigma2(i, c) = s.sigma2;
        }
      }
      clamped_by_col(c) = clamped;
    }
  });
  return arma::accu(clamped_by_col);
}

}  // namespace overgfm

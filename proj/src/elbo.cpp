#include "overgfm/elbo.hpp"

#include "overgfm/estep.hpp"
#include "overgfm/parallel.hpp"

#include <cmath>

namespace overgfm {

double evaluate_elbo(const CheckedData& ds, const ModelParams& params,
                     const VariationalParams& vp, const FitConfig& config,
                     long long* clamped) {
  const arma::uword n = ds.n();
  const arma::uword p = ds.p();
  const arma::mat pred_hb = params.H * params.B.t();  // n x p
  const arma::vec& a = ds.data.offsets;

  // site rank per column, or p for continuous columns
  arma::uvec site_of(p);
  site_of.fill(p);
  for (arma::uword c = 0; c < ds.sites.n_elem; ++c) site_of(ds.sites(c)) = c;

  arma::vec partial(p, arma::fill::zeros);
  arma::Col<long long> clamped_by_col(p, arma::fill::zeros);

  parallel_chunks(p, [&](std::size_t first, std::size_t last) {
    for (std::size_t j = first; j < last; ++j) {
      const ColumnSpec& col = ds.schema.columns[j];
      const double mu_j = params.mu(j);
      const double lam_j = params.lambda(j);
      const double log_lam = std::log(lam_j);
      long long nclamp = 0;
      double acc = 0.0;
      if (col.kind == VarKind::continuous) {
        for (arma::uword i = 0; i < n; ++i) {
          const double r = ds.data.X(i, j) - a(i) - pred_hb(i, j) - mu_j;
          acc += -0.5 * (r * r / lam_j + log_lam);
        }
      } else {
        const arma::uword c = site_of(j);
        const double trials = static_cast<double>(col.trials);
        for (arma::uword i = 0; i < n; ++i) {
          const double x = ds.data.X(i, j);
          const double tau = vp.tau(i, c);
          const double s2 = vp.sigma2(i, c);
          const double r = tau - a(i) - pred_hb(i, j) - mu_j;
          double site;
          if (col.kind == VarKind::count) {
            site = x * tau - exp_clamped(tau + 0.5 * s2, config.exp_clamp, nclamp);
          } else {
            const double g = sigmoid(tau);
            const double etilde = softplus(-tau) + 0.5 * s2 * g * (1.0 - g);
            site = (x - trials) * tau - trials * etilde;
          }
          acc += site - 0.5 * ((r * r + s2) / lam_j + log_lam) + 0.5 * std::log(s2);
        }
      }
      partial(j) = acc;
      clamped_by_col(j) = nclamp;
    }
  });

  double total = 0.0;
  for (arma::uword j = 0; j < p; ++j) total += partial(j);  // fixed column order
  if (clamped) *clamped += arma::accu(clamped_by_col);
  return total;
}

}  // namespace overgfm

#include "overgfm/driver.hpp"

#include "overgfm/elbo.hpp"
#include "overgfm/estep.hpp"
#include "overgfm/linalg.hpp"
#include "overgfm/mstep.hpp"

#include <chrono>
#include <cmath>

namespace overgfm {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::pair<ModelParams, VariationalParams> initialize(const CheckedData& ds, arma::uword q) {
  const arma::uword n = ds.n();
  const arma::uword p = ds.p();
  if (q < 1 || q >= std::min(n, p))
    throw std::invalid_argument("q must satisfy 1 <= q < min(n, p)");

  arma::mat surrogate = ds.data.X;
  for (arma::uword k = 0; k < ds.g2.n_elem; ++k) {
    const arma::uword j = ds.g2(k);
    surrogate.col(j) = arma::log1p(surrogate.col(j));
  }

  ModelParams params;
  params.mu = arma::mean(surrogate, 0).t();
  arma::mat centered = surrogate;
  centered.each_row() -= params.mu.t();
  std::tie(params.H, params.B) = svd_score_loading(centered, q);
  params.lambda.ones(p);

  VariationalParams vp;
  vp.tau.set_size(n, ds.sites.n_elem);
  vp.sigma2.ones(n, ds.sites.n_elem);
  for (arma::uword c = 0; c < ds.sites.n_elem; ++c) vp.tau.col(c) = surrogate.col(ds.sites(c));
  return {std::move(params), std::move(vp)};
}

ModelParams apply_identifiability(const ModelParams& params) {
  const arma::uword n = params.H.n_rows;
  const arma::uword q = params.H.n_cols;
  const double root_n = std::sqrt(static_cast<double>(n));

  const arma::rowvec hbar = arma::mean(params.H, 0);
  ModelParams out;
  out.lambda = params.lambda;
  out.mu = params.mu + params.B * hbar.t();  // centering absorbed into intercepts

  arma::mat Hc = params.H;
  Hc.each_row() -= hbar;
  // factor the centered product Hc B' through two thin QRs and a q x q SVD
  arma::mat Q1, R1, Q2, R2;
  if (!arma::qr_econ(Q1, R1, Hc) || !arma::qr_econ(Q2, R2, params.B))
    throw DataError("rank-deficient fit");
  arma::mat U, V;
  arma::vec s;
  if (!arma::svd(U, s, V, arma::mat(R1 * R2.t()))) throw DataError("rank-deficient fit");
  // Only an exactly collapsed factor blocks the projection; near-zero trailing
  // singular values are legitimate (they arise when q overshoots the true rank
  // and are exactly what the singular-value-ratio selector looks for).
  if (!(s(q - 1) > 0.0)) throw DataError("rank-deficient fit");

  out.H = root_n * Q1 * U;
  out.B = Q2 * V * arma::diagmat(s / root_n);

  // joint sign flip: first nonzero entry of each loading column positive
  for (arma::uword k = 0; k < q; ++k) {
    for (arma::uword j = 0; j < out.B.n_rows; ++j) {
      const double v = out.B(j, k);
      if (v == 0.0) continue;
      if (v < 0.0) {
        out.B.col(k) *= -1.0;
        out.H.col(k) *= -1.0;
      }
      break;
    }
  }
  return out;
}

FitResult fit(const CheckedData& ds, const FitConfig& config) {
  if (config.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  if (!(config.eps_elbo > 0.0)) throw std::invalid_argument("eps_elbo must be > 0");
  if (!(config.lambda_floor > 0.0)) throw std::invalid_argument("lambda_floor must be > 0");

  FitResult result;
  auto t0 = std::chrono::steady_clock::now();
  auto [params, vp] = initialize(ds, config.q);
  result.init_seconds = seconds_since(t0);

  auto t1 = std::chrono::steady_clock::now();
  result.elbo_trace.reserve(config.max_iter);
  for (arma::uword iter = 0; iter < config.max_iter; ++iter) {
    result.overflow_events += e_step(ds, params, vp, config);
    params = m_step(ds, params, vp, config);
    const double lb = evaluate_elbo(ds, params, vp, config, &result.overflow_events);
    result.elbo_trace.push_back(lb);
    const std::size_t t = result.elbo_trace.size();
    if (t >= 2) {
      const double prev = result.elbo_trace[t - 2];
      const double rel = std::abs(lb - prev) / std::max(std::abs(prev), 1e-300);
      if (rel < config.eps_elbo) {
        result.converged = true;
        break;
      }
    }
  }
  result.loop_seconds = seconds_since(t1);
  result.iterations = result.elbo_trace.size();
  result.params = apply_identifiability(params);
  return result;
}

}  // namespace overgfm

#pragma once

// Shared fixtures and independent oracles for the unit and acceptance tests.
// Oracles here deliberately avoid the library's own code paths: root finding
// by bisection, expectations by Gauss-Hermite quadrature, linear algebra by
// direct per-column solves.

#include "overgfm/estep.hpp"
#include "overgfm/simulate.hpp"
#include "overgfm/types.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

namespace testutil {

inline overgfm::SimSpec thirds_spec(arma::uword n, arma::uword p, arma::uword q, double sigma2,
                                    std::vector<double> rho, std::uint64_t seed) {
  overgfm::SimSpec spec;
  spec.n = n;
  spec.p = p;
  spec.q = q;
  const arma::uword t = p / 3;
  spec.type_mix = {{overgfm::VarKind::continuous, t},
                   {overgfm::VarKind::count, t},
                   {overgfm::VarKind::binomial, p - 2 * t}};
  spec.rho = std::move(rho);
  spec.sigma2 = sigma2;
  spec.seed = seed;
  return spec;
}

inline overgfm::CheckedData make_dataset(const overgfm::SimSpec& spec) {
  const overgfm::SimulatedDataset sim = overgfm::generate_dataset(spec);
  return overgfm::validate(sim.data, sim.schema);
}

inline overgfm::ModelParams random_params(std::mt19937_64& rng, arma::uword n, arma::uword p,
                                          arma::uword q) {
  std::normal_distribution<double> normal(0.0, 0.5);
  std::uniform_real_distribution<double> unif(0.3, 2.0);
  overgfm::ModelParams params;
  params.B.set_size(p, q);
  params.H.set_size(n, q);
  params.mu.set_size(p);
  params.lambda.set_size(p);
  for (auto& v : params.B) v = normal(rng);
  for (auto& v : params.H) v = normal(rng);
  for (auto& v : params.mu) v = normal(rng);
  for (auto& v : params.lambda) v = unif(rng);
  return params;
}

inline overgfm::VariationalParams random_varparams(std::mt19937_64& rng, arma::uword n,
                                                   arma::uword sites) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.05, 1.5);
  overgfm::VariationalParams vp;
  vp.tau.set_size(n, sites);
  vp.sigma2.set_size(n, sites);
  for (auto& v : vp.tau) v = normal(rng);
  for (auto& v : vp.sigma2) v = unif(rng);
  return vp;
}

// First-order stationarity conditions of the per-site objective; both are
// strictly decreasing in tau, so a sign-bracketing bisection is exact.
inline double poisson_stationarity(double x, double tau, double ztilde, double lambda) {
  return x - std::exp(tau) - (tau - ztilde) / lambda;
}

inline double binomial_stationarity(double x, double n_trials, double tau, double ztilde,
                                    double lambda) {
  return (x - n_trials) + n_trials * (1.0 - overgfm::sigmoid(tau)) - (tau - ztilde) / lambda;
}

inline double bisect_root(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  double fhi = f(hi);
  if (!(flo > 0.0 && fhi < 0.0)) throw std::runtime_error("bisection bracket does not straddle");
  for (int it = 0; it < 500 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm > 0.0) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  return 0.5 * (lo + hi);
}

// Iterate a one-step site update to its fixed point (expansion point chases
// the previous tau, exactly as the outer loop does across iterations).
template <typename Step>
inline overgfm::SiteUpdate iterate_to_fixed_point(const Step& step, double y0_start,
                                                  double* delta_out = nullptr) {
  double y0 = y0_start;
  overgfm::SiteUpdate u{y0_start, 1.0};
  double delta = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 500; ++it) {
    u = step(y0);
    delta = std::abs(u.tau - y0);
    if (delta < 1e-12) break;
    y0 = u.tau;
  }
  if (delta_out) *delta_out = delta;
  return u;
}

// 20-node Gauss-Hermite rule (weight e^{-t^2}); nodes/weights for the
// positive half, mirrored below.
inline const std::vector<double>& gh20_nodes() {
  static const std::vector<double> nodes = {
      0.245340708300901, 0.737473728545394, 1.234076215395323, 1.738537712116586,
      2.254974002089276, 2.788806058428130, 3.347854567383216, 3.944764040115625,
      4.603682449550744, 5.387480890011233};
  return nodes;
}

inline const std::vector<double>& gh20_weights() {
  static const std::vector<double> weights = {
      4.62243669600610e-01, 2.86675505362834e-01, 1.09017206020023e-01, 2.48105208874636e-02,
      3.24377334223786e-03, 2.28338636016353e-04, 7.80255647853206e-06, 1.08606937076928e-07,
      4.39934099227318e-10, 2.22939364553415e-13};
  return weights;
}

// E[f(Y)] for Y ~ N(mean, var) by Gauss-Hermite quadrature.
inline double gh20_expect(const std::function<double(double)>& f, double mean, double var) {
  const double scale = std::sqrt(2.0 * var);
  double total = 0.0;
  for (std::size_t k = 0; k < gh20_nodes().size(); ++k) {
    const double t = gh20_nodes()[k];
    const double w = gh20_weights()[k];
    total += w * (f(mean + scale * t) + f(mean - scale * t));
  }
  return total / std::sqrt(arma::datum::pi);
}

}  // namespace testutil

#pragma once

#include "overgfm/types.hpp"

#include <cmath>

namespace overgfm {

/// Logistic function, stable for large |y|.
inline double sigmoid(double y) {
  if (y >= 0.0) {
    const double e = std::exp(-y);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(y);
  return e / (1.0 + e);
}

/// ln(1 + e^y) without overflow.
inline double softplus(double y) {
  if (y > 0.0) return y + std::log1p(std::exp(-y));
  return std::log1p(std::exp(y));
}

/// exp with the argument capped at `cap`; bumps the counter when it engages.
inline double exp_clamped(double a, double cap, long long& clamped) {
  if (a > cap) {
    ++clamped;
    a = cap;
  }
  return std::exp(a);
}

struct SiteUpdate {
  double tau;
  double sigma2;
};

/// One second-order site update for a count observation, expanded about y0:
///   tau    = (x - e^{y0}(1 - y0) + ztilde/lambda) / (1/lambda + e^{y0})
///   sigma2 = 1 / (1/lambda + e^{tau})
SiteUpdate poisson_site_update(double x, double y0, double ztilde, double lambda,
                               double exp_clamp, long long& clamped);

/// Binomial counterpart with mean n*g(y) for the logistic g:
///   tau    = (x - n g(y0) + n y0 g(y0)(1-g(y0)) + ztilde/lambda)
///            / (1/lambda + n g(y0)(1-g(y0)))
///   sigma2 = 1 / (1/lambda + n g(tau)(1-g(tau)))
SiteUpdate binomial_site_update(double x, double n_trials, double y0, double ztilde,
                                double lambda, double exp_clamp, long long& clamped);

/// One Taylor pass over every count/binomial site, expansion point the
/// previous tau and ztilde = a_i + mu_j + b_j'h_i. Continuous columns have
/// no variational sites. Updates vp in place; returns the number of clamped
/// exponentials. Sites are independent, so the result never depends on the
/// worker count.
long long e_step(const CheckedData& ds, const ModelParams& params, VariationalParams& vp,
                 const FitConfig& config);

}  // namespace overgfm

#pragma once

#include "overgfm/types.hpp"

namespace overgfm {

/// Evidence lower bound with parameter-free constants dropped. Continuous
/// columns contribute the Gaussian log density of the residual; count sites
/// add x*tau - E_q e^y with E_q e^y = exp(tau + sigma2/2); binomial sites add
/// (x - n)tau - n*Etilde where Etilde approximates E_q ln(1+e^{-y}) by a
/// second-order expansion about tau; all sites share the Gaussian penalty
/// ((tau - a - b'h - mu)^2 + sigma2)/lambda and the entropy ln(sigma2)/2.
/// Accumulated column by column in a fixed order, so the value is bitwise
/// reproducible for any worker count. Clamped exponentials are counted into
/// *clamped when given.
double evaluate_elbo(const CheckedData& ds, const ModelParams& params,
                     const VariationalParams& vp, const FitConfig& config,
                     long long* clamped = nullptr);

}  // namespace overgfm

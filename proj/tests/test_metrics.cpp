#include "overgfm/metrics.hpp"

#include "doctest.h"
#include "helpers.hpp"
#include "overgfm/driver.hpp"

#include <random>

using namespace overgfm;
using doctest::Approx;

TEST_CASE("identical matrices score one") {
  arma::mat A(20, 3, arma::fill::randn);
  CHECK(trace_statistic(A, A) == Approx(1.0).epsilon(1e-13));
}

TEST_CASE("any invertible recombination scores one") {
  arma::arma_rng::set_seed(17);
  const arma::mat A(30, 4, arma::fill::randn);
  for (int k = 0; k < 10; ++k) {
    const arma::mat R(4, 4, arma::fill::randn);
    if (std::abs(arma::det(R)) < 1e-3) continue;
    CHECK(std::abs(trace_statistic(A * R, A) - 1.0) < 1e-12);
  }
}

TEST_CASE("orthogonal subspaces score zero") {
  arma::mat Ahat(6, 2, arma::fill::zeros);
  Ahat(0, 0) = 1.0;
  Ahat(1, 1) = 1.0;
  arma::mat A0(6, 2, arma::fill::zeros);
  A0(2, 0) = 2.0;
  A0(3, 1) = -1.0;
  CHECK(trace_statistic(Ahat, A0) == Approx(0.0));
}

TEST_CASE("values stay inside the unit interval") {
  arma::arma_rng::set_seed(19);
  for (int k = 0; k < 25; ++k) {
    const arma::mat Ahat(15, 3, arma::fill::randn);
    const arma::mat A0(15, 2, arma::fill::randn);
    const double v = trace_statistic(Ahat, A0);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("row mismatch and rank deficiency are rejected") {
  const arma::mat A(10, 2, arma::fill::randn);
  const arma::mat B(11, 2, arma::fill::randn);
  CHECK_THROWS_AS(trace_statistic(A, B), std::invalid_argument);

  arma::mat dup(10, 2);
  dup.col(0) = A.col(0);
  dup.col(1) = A.col(0);  // exactly collinear estimate
  CHECK_THROWS_AS(trace_statistic(dup, A), DataError);
}

TEST_CASE("intercept-loading variant matches a direct projector oracle") {
  arma::arma_rng::set_seed(23);
  const arma::mat Bhat(12, 3, arma::fill::randn);
  const arma::vec muhat(12, arma::fill::randn);
  const arma::mat B0(12, 3, arma::fill::randn);
  const arma::vec mu0(12, arma::fill::randn);
  const double got = trace_statistic_upsilon(Bhat, muhat, B0, mu0);

  const arma::mat Uhat = arma::join_rows(arma::mat(muhat), Bhat);
  const arma::mat U0 = arma::join_rows(arma::mat(mu0), B0);
  const arma::mat P = Uhat * arma::inv_sympd(Uhat.t() * Uhat) * Uhat.t();
  const double want = arma::trace(U0.t() * P * U0) / arma::trace(U0.t() * U0);
  CHECK(got == Approx(want).epsilon(1e-10));

  CHECK(trace_statistic_upsilon(B0, mu0, B0, mu0) == Approx(1.0).epsilon(1e-13));
}

TEST_CASE("linear baseline reproduces exact low-rank data") {
  std::mt19937_64 rng(26);
  const ModelParams truth = testutil::random_params(rng, 40, 10, 2);
  arma::mat H = truth.H;
  H.each_row() -= arma::mean(truth.H, 0);  // exact factors live in the centered space
  const arma::mat X =
      arma::ones<arma::vec>(40) * truth.mu.t() + H * truth.B.t();
  const LfmFit lfm = fit_lfm(X, 2);
  CHECK(trace_statistic(lfm.H, H) == Approx(1.0).epsilon(1e-10));
  CHECK(arma::abs(lfm.H * lfm.B.t() - H * truth.B.t()).max() < 1e-10);
}

TEST_CASE("projection onto independent noise is near zero") {
  arma::arma_rng::set_seed(29);
  const arma::mat noise(400, 1, arma::fill::randn);
  const arma::mat H0(400, 1, arma::fill::randn);
  CHECK(trace_statistic(noise, H0) < 0.05);
}

TEST_CASE("the nonlinear fit beats the linear baseline on mixed data") {
  const overgfm::SimSpec spec = testutil::thirds_spec(300, 300, 6, 0.5, {0.05, 0.2, 0.1}, 131);
  const SimulatedDataset sim = generate_dataset(spec);
  const CheckedData ds = validate(sim.data, sim.schema);
  FitConfig config;
  config.q = 6;
  const FitResult result = fit(ds, config);
  const LfmFit lfm = fit_lfm(ds.data.X, 6);
  const double ours =
      trace_statistic_upsilon(result.params.B, result.params.mu, sim.B0, sim.mu0);
  const double theirs = trace_statistic_upsilon(lfm.B, lfm.mu, sim.B0, sim.mu0);
  CHECK(ours > theirs + 0.2);  // raw-count loadings miss the log-scale structure
}

#include "overgfm/selectq.hpp"

#include "doctest.h"
#include "helpers.hpp"

#include <cmath>

using namespace overgfm;
using doctest::Approx;

namespace {

arma::mat diagonal_loadings(const arma::vec& singulars, arma::uword p) {
  arma::mat B(p, singulars.n_elem, arma::fill::zeros);
  for (arma::uword k = 0; k < singulars.n_elem; ++k) B(k, k) = singulars(k);
  return B;
}

}  // namespace

TEST_CASE("constructed diagonal spectrum yields the expected ratios") {
  const SvrReport report = singular_value_ratios(diagonal_loadings({10.0, 9.0, 0.1, 0.05}, 6));
  REQUIRE(report.singular_values.n_elem == 4);
  REQUIRE(report.ratios.n_elem == 3);
  CHECK(report.singular_values(0) == Approx(10.0));
  CHECK(report.ratios(0) == Approx(10.0 / 9.0));
  CHECK(report.ratios(1) == Approx(90.0));
  CHECK(report.ratios(2) == Approx(2.0));
  CHECK(report.q_hat == 2);
  CHECK(report.max_ratio == Approx(90.0));
}

TEST_CASE("flat spectrum breaks ties toward the smallest index") {
  arma::mat B(8, 3, arma::fill::zeros);
  B(0, 0) = B(1, 1) = B(2, 2) = 3.0;  // orthogonal columns, equal norms
  const SvrReport report = singular_value_ratios(B);
  for (arma::uword k = 0; k < report.ratios.n_elem; ++k)
    CHECK(report.ratios(k) == Approx(1.0));
  CHECK(report.q_hat == 1);
}

TEST_CASE("ratios are invariant to uniform rescaling of the loadings") {
  std::mt19937_64 rng(25);
  arma::mat B(12, 5);
  std::normal_distribution<double> normal;
  for (auto& v : B) v = normal(rng);
  const SvrReport a = singular_value_ratios(B);
  const SvrReport b = singular_value_ratios(arma::mat(2.5 * B));
  CHECK(a.q_hat == b.q_hat);
  for (arma::uword k = 0; k < a.ratios.n_elem; ++k)
    CHECK(a.ratios(k) == Approx(b.ratios(k)).epsilon(1e-12));
}

TEST_CASE("zero loading matrix is rejected") {
  CHECK_THROWS_WITH_AS(singular_value_ratios(arma::mat(5, 3, arma::fill::zeros)),
                       doctest::Contains("zero loading matrix"), DataError);
}

TEST_CASE("vanishing trailing singular value wins as an infinite ratio") {
  arma::mat B(6, 2, arma::fill::zeros);
  B(0, 0) = 4.0;  // rank one: second singular value is exactly zero
  const SvrReport report = singular_value_ratios(B);
  REQUIRE(report.ratios.n_elem == 1);
  CHECK(std::isinf(report.ratios(0)));
  CHECK(report.q_hat == 1);
}

TEST_CASE("ratios below the numerical-rank floor are excluded from the argmax") {
  arma::mat B(6, 3, arma::fill::zeros);
  B(0, 0) = 4.0;  // singulars (4, 0, 0): the trailing 0/0 must not win
  const SvrReport report = singular_value_ratios(B);
  REQUIRE(report.ratios.n_elem == 2);
  CHECK(std::isinf(report.ratios(0)));
  CHECK(std::isnan(report.ratios(1)));
  CHECK(report.q_hat == 1);
}

TEST_CASE("select_num_factors rejects q_max at or above min(n,p)") {
  const overgfm::SimSpec spec = testutil::thirds_spec(20, 9, 2, 0.4, {0.4, 0.3, 0.5}, 67);
  const CheckedData ds = testutil::make_dataset(spec);
  FitConfig config;
  CHECK_THROWS_AS(select_num_factors(ds, 9, config), std::invalid_argument);
}

TEST_CASE("rank-one noiseless data selects a single factor") {
  overgfm::SimSpec spec;
  spec.n = 60;
  spec.p = 12;
  spec.q = 1;
  spec.type_mix = {{VarKind::continuous, 6}, {VarKind::count, 6}};
  spec.rho = {0.8, 0.5};
  spec.sigma2 = 0.0;
  spec.seed = 71;
  const CheckedData ds = testutil::make_dataset(spec);
  FitConfig config;
  const SvrReport report = select_num_factors(ds, 2, config);
  CHECK(report.q_hat == 1);
  CHECK(report.ratios.n_elem == 1);
}

TEST_CASE("a converged mixed fit recovers the planted dimension") {
  const overgfm::SimSpec spec = testutil::thirds_spec(300, 300, 6, 0.1, {0.4, 0.2, 0.5}, 73);
  const CheckedData ds = testutil::make_dataset(spec);
  FitConfig config;
  const SvrReport report = select_num_factors(ds, 15, config);
  REQUIRE(report.singular_values.n_elem == 15);
  REQUIRE(report.ratios.n_elem == 14);
  CHECK(report.q_hat == 6);
  CHECK(report.max_ratio > 1.2);
}

#include "overgfm/simulate.hpp"

#include "overgfm/estep.hpp"
#include "overgfm/rng.hpp"

#include <cmath>
#include <sstream>

namespace overgfm {

void SimSpec::check() const {
  if (n < 2 || p < 1 || q < 1) throw std::invalid_argument("need n >= 2, p >= 1, q >= 1");
  if (q >= std::min(n, p)) throw std::invalid_argument("q must be below min(n, p)");
  if (type_mix.empty()) throw std::invalid_argument("type_mix is empty");
  if (rho.size() != type_mix.size())
    throw std::invalid_argument("rho must list one value per type_mix block");
  arma::uword total = 0;
  for (const auto& [kind, count] : type_mix) {
    (void)kind;
    if (count == 0) throw std::invalid_argument("type_mix block with zero columns");
    total += count;
  }
  if (total != p) throw std::invalid_argument("type_mix counts must sum to p");
  for (double r : rho)
    if (!(r > 0.0)) throw std::invalid_argument("rho entries must be positive");
  if (sigma2 < 0.0) throw std::invalid_argument("sigma2 must be >= 0");
  if (noise == NoiseKind::student_t && !(t_df > 0.0))
    throw std::invalid_argument("t_df must be positive");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
}

namespace sim_detail {

std::pair<arma::mat, arma::mat> canonical_loadings(const arma::mat& Bbar) {
  arma::mat U, V;
  arma::vec s;
  if (!arma::svd_econ(U, s, V, Bbar)) throw DataError("svd failed on loading draws");
  return {U * arma::diagmat(s), V};
}

arma::mat canonical_factors(const arma::mat& Hbreve, const arma::mat& V2) {
  const arma::uword n = Hbreve.n_rows;
  arma::mat Hc = Hbreve;
  Hc.each_row() -= arma::mean(Hbreve, 0);
  arma::mat Q, R;
  if (!arma::qr_econ(Q, R, Hc)) throw DataError("qr failed on factor draws");
  for (arma::uword k = 0; k < Q.n_cols; ++k)
    if (R(k, k) < 0.0) Q.col(k) *= -1.0;  // fix the QR sign convention
  return std::sqrt(static_cast<double>(n)) * Q * V2;
}

}  // namespace sim_detail

namespace {

arma::mat draw_normal(std::mt19937_64& gen, arma::uword rows, arma::uword cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  arma::mat M(rows, cols);
  for (arma::uword j = 0; j < cols; ++j)
    for (arma::uword i = 0; i < rows; ++i) M(i, j) = normal(gen);
  return M;
}

// AR(1) factor correlation: Sigma_kl = 0.5^|k-l|
arma::mat factor_chol(arma::uword q) {
  arma::mat Sigma(q, q);
  for (arma::uword k = 0; k < q; ++k)
    for (arma::uword l = 0; l < q; ++l)
      Sigma(k, l) = std::pow(0.5, std::abs(static_cast<int>(k) - static_cast<int>(l)));
  return arma::chol(Sigma);  // upper R with R'R = Sigma
}

}  // namespace

SimulatedDataset generate_dataset(const SimSpec& spec) {
  spec.check();
  const arma::uword n = spec.n;
  const arma::uword p = spec.p;
  const arma::uword q = spec.q;

  VariableSchema schema;
  schema.columns.reserve(p);
  for (const auto& [kind, count] : spec.type_mix) {
    for (arma::uword c = 0; c < count; ++c) {
      ColumnSpec col;
      col.name = "x" + std::to_string(schema.columns.size() + 1);
      col.kind = kind;
      col.trials = kind == VarKind::binomial ? spec.trials : 1;
      schema.columns.push_back(std::move(col));
    }
  }

  // loadings: standard-normal draws, block rows scaled by the block rho
  auto loading_stream = make_stream(spec.seed, "loadings");
  arma::mat Bbar = draw_normal(loading_stream, p, q);
  arma::uword row = 0;
  for (std::size_t b = 0; b < spec.type_mix.size(); ++b) {
    const arma::uword count = spec.type_mix[b].second;
    Bbar.rows(row, row + count - 1) *= spec.rho[b];
    row += count;
  }
  auto [B0, V2] = sim_detail::canonical_loadings(Bbar);

  auto factor_stream = make_stream(spec.seed, "factors");
  const arma::mat Hbreve = draw_normal(factor_stream, n, q) * factor_chol(q);
  const arma::mat H0 = sim_detail::canonical_factors(Hbreve, V2);

  auto intercept_stream = make_stream(spec.seed, "intercepts");
  const arma::vec mu0 = spec.mu_scale * draw_normal(intercept_stream, p, 1);

  arma::mat Y0 = H0 * B0.t();
  Y0.each_row() += mu0.t();
  if (spec.sigma2 > 0.0) {
    auto noise_stream = make_stream(spec.seed, "noise");
    arma::mat E = std::sqrt(spec.sigma2) * draw_normal(noise_stream, n, p);
    if (spec.noise == NoiseKind::student_t) {
      auto mix_stream = make_stream(spec.seed, "noise_mixing");
      std::chi_squared_distribution<double> chi2(spec.t_df);
      for (arma::uword i = 0; i < n; ++i) E.row(i) *= std::sqrt(spec.t_df / chi2(mix_stream));
    }
    Y0 += E;
  }

  MixedDataMatrix data;
  data.X.set_size(n, p);
  auto emit_stream = make_stream(spec.seed, "emission");
  for (arma::uword j = 0; j < p; ++j) {
    const ColumnSpec& col = schema.columns[j];
    switch (col.kind) {
      case VarKind::continuous:
        data.X.col(j) = Y0.col(j);
        break;
      case VarKind::count:
        for (arma::uword i = 0; i < n; ++i) {
          const double mean = std::exp(Y0(i, j));
          if (mean > 1e12) {
            std::ostringstream os;
            os << "poisson mean overflow at row " << (i + 1) << ", column " << (j + 1)
               << ": e^y = " << mean << "; decrease rho or sigma2";
            throw DataError(os.str());
          }
          std::poisson_distribution<long long> poisson(mean);
          data.X(i, j) = static_cast<double>(poisson(emit_stream));
        }
        break;
      case VarKind::binomial: {
        for (arma::uword i = 0; i < n; ++i) {
          std::binomial_distribution<long long> binomial(col.trials, sigmoid(Y0(i, j)));
          data.X(i, j) = static_cast<double>(binomial(emit_stream));
        }
        break;
      }
    }
  }

  SimulatedDataset out;
  out.data = std::move(data);
  out.schema = std::move(schema);
  out.H0 = H0;
  out.B0 = std::move(B0);
  out.mu0 = mu0;
  out.Y0 = std::move(Y0);
  return out;
}

double vmr(const arma::vec& counts) {
  const double mean = arma::mean(counts);
  if (!(mean > 0.0)) throw DataError("vmr undefined: column mean is not positive");
  return arma::var(counts) / mean;
}

}  // namespace overgfm

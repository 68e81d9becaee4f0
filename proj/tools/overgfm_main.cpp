// Command-line front end: simulate / fit / select-q / evaluate / benchmark.
// Exit codes: 0 success, 2 usage error, 3 data error, 4 non-convergence.

#include "overgfm/driver.hpp"
#include "overgfm/io.hpp"
#include "overgfm/metrics.hpp"
#include "overgfm/parallel.hpp"
#include "overgfm/rng.hpp"
#include "overgfm/selectq.hpp"
#include "overgfm/simulate.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace overgfm;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNoConverge = 4;

double wall_seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int resolve_threads(std::optional<int> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("OVERGFM_THREADS")) {
    try {
      return std::stoi(env);
    } catch (...) {
      throw std::invalid_argument("OVERGFM_THREADS is not an integer");
    }
  }
  return 1;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = text.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

// --types continuous:100,count:100,binomial:100
std::vector<std::pair<VarKind, arma::uword>> parse_types(const std::string& text) {
  std::vector<std::pair<VarKind, arma::uword>> mix;
  for (const std::string& block : split(text, ',')) {
    const std::vector<std::string> kv = split(block, ':');
    if (kv.size() != 2) throw std::invalid_argument("--types expects kind:count blocks");
    long long count = 0;
    try {
      count = std::stoll(kv[1]);
    } catch (...) {
      throw std::invalid_argument("--types count is not an integer: '" + kv[1] + "'");
    }
    if (count < 1) throw std::invalid_argument("--types counts must be >= 1");
    try {
      mix.emplace_back(parse_var_kind(kv[0]), static_cast<arma::uword>(count));
    } catch (const DataError& e) {
      throw std::invalid_argument(e.what());
    }
  }
  return mix;
}

std::vector<double> parse_rho(const std::string& text) {
  std::vector<double> rho;
  for (const std::string& tok : split(text, ',')) {
    try {
      rho.push_back(std::stod(tok));
    } catch (...) {
      throw std::invalid_argument("--rho entry is not a number: '" + tok + "'");
    }
  }
  return rho;
}

// --noise gaussian | t:DF
std::pair<NoiseKind, double> parse_noise(const std::string& text) {
  if (text == "gaussian") return {NoiseKind::gaussian, 1.0};
  if (text.rfind("t:", 0) == 0) {
    try {
      return {NoiseKind::student_t, std::stod(text.substr(2))};
    } catch (...) {
      throw std::invalid_argument("--noise t:DF needs a numeric DF");
    }
  }
  throw std::invalid_argument("--noise must be 'gaussian' or 't:DF'");
}

void write_manifest(const fs::path& dir, json manifest, double wall_seconds) {
  manifest["version"] = kVersion;
  manifest["wall_seconds"] = wall_seconds;
  write_text_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
}

CheckedData load_dataset(const fs::path& data_path, const fs::path& schema_path,
                         const std::optional<fs::path>& offsets_path) {
  VariableSchema schema = load_schema(schema_path);
  std::vector<std::string> header;
  MixedDataMatrix data;
  data.X = load_matrix_csv(data_path, &header);
  if (header.size() != schema.p())
    throw DataError(data_path.string() + ": header has " + std::to_string(header.size()) +
                    " columns but schema lists " + std::to_string(schema.p()));
  for (arma::uword j = 0; j < schema.p(); ++j)
    if (header[j] != schema.columns[j].name)
      throw DataError(data_path.string() + ": header column " + std::to_string(j + 1) + " is '" +
                      header[j] + "' but schema says '" + schema.columns[j].name + "'");
  if (offsets_path) data.offsets = load_offsets(*offsets_path);
  return validate(std::move(data), std::move(schema));
}

struct SimulateArgs {
  long long n = 0, p = 0, q = 0;
  std::string types, rho;
  double sigma2 = 0.0;
  std::string noise = "gaussian";
  double mu_scale = 0.4;
  long long trials = 1;
  std::uint64_t seed = 0;
  std::string out;
};

int run_simulate(const SimulateArgs& args) {
  auto t0 = std::chrono::steady_clock::now();
  SimSpec spec;
  if (args.n < 2 || args.p < 1 || args.q < 1)
    throw std::invalid_argument("--n, --p, --q must be positive (n >= 2)");
  spec.n = static_cast<arma::uword>(args.n);
  spec.p = static_cast<arma::uword>(args.p);
  spec.q = static_cast<arma::uword>(args.q);
  spec.type_mix = parse_types(args.types);
  spec.rho = parse_rho(args.rho);
  spec.sigma2 = args.sigma2;
  std::tie(spec.noise, spec.t_df) = parse_noise(args.noise);
  spec.mu_scale = args.mu_scale;
  spec.trials = args.trials;
  spec.seed = args.seed;
  spec.check();

  const SimulatedDataset sim = generate_dataset(spec);
  const fs::path dir(args.out);
  fs::create_directories(dir);
  save_data_csv(dir / "data.csv", sim.data, sim.schema);
  save_schema(dir / "schema.csv", sim.schema);
  save_matrix_csv(dir / "H0.csv", sim.H0, "h");
  save_matrix_csv(dir / "B0.csv", sim.B0, "b");
  save_vector_csv(dir / "mu0.csv", sim.mu0, "mu");

  json manifest;
  manifest["command"] = "simulate";
  manifest["seed"] = spec.seed;
  manifest["config"] = {{"n", args.n},       {"p", args.p},
                        {"q", args.q},       {"types", args.types},
                        {"rho", args.rho},   {"sigma2", args.sigma2},
                        {"noise", args.noise}, {"mu_scale", args.mu_scale},
                        {"trials", args.trials}};
  manifest["outputs"] = {{"data", (dir / "data.csv").string()},
                         {"schema", (dir / "schema.csv").string()},
                         {"H0", (dir / "H0.csv").string()},
                         {"B0", (dir / "B0.csv").string()},
                         {"mu0", (dir / "mu0.csv").string()}};
  write_manifest(dir, std::move(manifest), wall_seconds_since(t0));
  return 0;
}

struct FitArgs {
  std::string data, schema, out;
  std::optional<std::string> offsets;
  long long q = 0;
  long long max_iter = 100;
  double eps_elbo = 1e-4;
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
};

int run_fit(const FitArgs& args) {
  auto t0 = std::chrono::steady_clock::now();
  set_worker_threads(resolve_threads(args.threads));
  std::optional<fs::path> offsets;
  if (args.offsets) offsets = fs::path(*args.offsets);
  const CheckedData ds = load_dataset(args.data, args.schema, offsets);

  FitConfig config;
  if (args.q < 1) throw std::invalid_argument("--q must be >= 1");
  config.q = static_cast<arma::uword>(args.q);
  if (args.max_iter < 1) throw std::invalid_argument("--max-iter must be >= 1");
  config.max_iter = static_cast<arma::uword>(args.max_iter);
  config.eps_elbo = args.eps_elbo;
  config.seed = args.seed;
  if (config.q >= std::min(ds.n(), ds.p()))
    throw std::invalid_argument("--q must be below min(n, p)");

  const FitResult result = fit(ds, config);

  const fs::path dir(args.out);
  fs::create_directories(dir);
  save_matrix_csv(dir / "H.csv", result.params.H, "h");
  save_matrix_csv(dir / "B.csv", result.params.B, "b");
  save_vector_csv(dir / "mu.csv", result.params.mu, "mu");
  save_vector_csv(dir / "lambda.csv", result.params.lambda, "lambda");
  save_vector_csv(dir / "elbo_trace.csv",
                  arma::vec(result.elbo_trace), "elbo");

  json manifest;
  manifest["command"] = "fit";
  manifest["inputs"] = {{"data", args.data}, {"schema", args.schema}};
  if (args.offsets) manifest["inputs"]["offsets"] = *args.offsets;
  manifest["config"] = {{"q", args.q},
                        {"max_iter", args.max_iter},
                        {"eps_elbo", args.eps_elbo},
                        {"lambda_floor", config.lambda_floor},
                        {"exp_clamp", config.exp_clamp},
                        {"threads", worker_threads()}};
  if (args.seed) manifest["seed"] = *args.seed;
  manifest["outputs"] = {{"H", (dir / "H.csv").string()},
                         {"B", (dir / "B.csv").string()},
                         {"mu", (dir / "mu.csv").string()},
                         {"lambda", (dir / "lambda.csv").string()},
                         {"elbo_trace", (dir / "elbo_trace.csv").string()}};
  manifest["converged"] = result.converged;
  manifest["iterations"] = result.iterations;
  manifest["overflow_events"] = result.overflow_events;
  manifest["final_elbo"] = result.elbo_trace.empty() ? 0.0 : result.elbo_trace.back();
  write_manifest(dir, std::move(manifest), wall_seconds_since(t0));

  if (!result.converged) {
    std::cerr << "fit: no convergence within " << args.max_iter << " iterations\n";
    return kExitNoConverge;
  }
  return 0;
}

struct SelectQArgs {
  std::string data, schema, out;
  long long q_max = 15;
  long long max_iter = 100;
  double eps_elbo = 1e-4;
  std::optional<int> threads;
};

int run_select_q(const SelectQArgs& args) {
  auto t0 = std::chrono::steady_clock::now();
  set_worker_threads(resolve_threads(args.threads));
  const CheckedData ds = load_dataset(args.data, args.schema, std::nullopt);
  if (args.q_max < 2) throw std::invalid_argument("--q-max must be >= 2");

  FitConfig config;
  config.max_iter = static_cast<arma::uword>(args.max_iter);
  config.eps_elbo = args.eps_elbo;
  const SvrReport report = select_num_factors(ds, static_cast<arma::uword>(args.q_max), config);

  const fs::path dir(args.out);
  fs::create_directories(dir);
  std::ostringstream os;
  os << "k,singular_value,ratio\n";
  for (arma::uword k = 0; k < report.singular_values.n_elem; ++k) {
    os << (k + 1) << ',' << format_double(report.singular_values(k)) << ',';
    if (k + 1 < report.singular_values.n_elem) os << format_double(report.ratios(k));
    os << '\n';
  }
  write_text_atomic(dir / "svr.csv", os.str());

  json manifest;
  manifest["command"] = "select-q";
  manifest["inputs"] = {{"data", args.data}, {"schema", args.schema}};
  manifest["config"] = {{"q_max", args.q_max},
                        {"max_iter", args.max_iter},
                        {"eps_elbo", args.eps_elbo},
                        {"threads", worker_threads()}};
  manifest["outputs"] = {{"svr", (dir / "svr.csv").string()}};
  manifest["q_hat"] = report.q_hat;
  manifest["max_ratio"] = format_double(report.max_ratio);
  write_manifest(dir, std::move(manifest), wall_seconds_since(t0));
  std::cout << "q_hat=" << report.q_hat << "\n";
  return 0;
}

struct EvaluateArgs {
  std::optional<std::string> est_h, true_h, est_b, est_mu, true_b, true_mu;
  std::string out;
};

int run_evaluate(const EvaluateArgs& args) {
  auto t0 = std::chrono::steady_clock::now();
  const bool want_h = args.est_h || args.true_h;
  const bool want_gamma = args.est_b || args.est_mu || args.true_b || args.true_mu;
  if (want_h && (!args.est_h || !args.true_h))
    throw std::invalid_argument("factor comparison needs both --est-h and --true-h");
  if (want_gamma && (!args.est_b || !args.est_mu || !args.true_b || !args.true_mu))
    throw std::invalid_argument(
        "loading comparison needs --est-b, --est-mu, --true-b and --true-mu");
  if (!want_h && !want_gamma)
    throw std::invalid_argument("nothing to evaluate: give --est-h/--true-h or the loading set");

  json report;
  json inputs;
  if (want_h) {
    const arma::mat Ahat = load_matrix_csv(*args.est_h);
    const arma::mat A0 = load_matrix_csv(*args.true_h);
    report["tr_h"] = trace_statistic(Ahat, A0);
    inputs["est_h"] = *args.est_h;
    inputs["true_h"] = *args.true_h;
  }
  if (want_gamma) {
    const arma::mat Bhat = load_matrix_csv(*args.est_b);
    const arma::vec muhat = load_vector_csv(*args.est_mu);
    const arma::mat B0 = load_matrix_csv(*args.true_b);
    const arma::vec mu0 = load_vector_csv(*args.true_mu);
    report["tr_gamma"] = trace_statistic_upsilon(Bhat, muhat, B0, mu0);
    inputs["est_b"] = *args.est_b;
    inputs["est_mu"] = *args.est_mu;
    inputs["true_b"] = *args.true_b;
    inputs["true_mu"] = *args.true_mu;
  }

  const fs::path dir(args.out);
  fs::create_directories(dir);
  write_text_atomic(dir / "evaluation.json", report.dump(2) + "\n");

  json manifest;
  manifest["command"] = "evaluate";
  manifest["inputs"] = inputs;
  manifest["outputs"] = {{"evaluation", (dir / "evaluation.json").string()}};
  manifest["results"] = report;
  write_manifest(dir, std::move(manifest), wall_seconds_since(t0));
  std::cout << report.dump() << "\n";
  return 0;
}

struct BenchmarkArgs {
  std::string scenario;
  long long replicates = 20;
  std::uint64_t seed = 1;
  std::optional<int> threads;
  std::string out;
};

struct BenchCell {
  std::string label;
  SimSpec spec;
};

std::vector<std::pair<VarKind, arma::uword>> thirds_mix(arma::uword p) {
  const arma::uword t = p / 3;
  return {{VarKind::continuous, t}, {VarKind::count, t}, {VarKind::binomial, p - 2 * t}};
}

SimSpec mixed_spec(arma::uword n, arma::uword p, double sigma2, std::vector<double> rho) {
  SimSpec spec;
  spec.n = n;
  spec.p = p;
  spec.q = 6;
  spec.type_mix = thirds_mix(p);
  spec.rho = std::move(rho);
  spec.sigma2 = sigma2;
  return spec;
}

class ReplicateLog {
 public:
  explicit ReplicateLog(const fs::path& path) : out_(path, std::ios::trunc) {
    if (!out_) throw DataError("cannot write '" + path.string() + "'");
    out_ << "cell,rep,method,metric,value\n" << std::flush;
  }
  void add(const std::string& cell, long long rep, const std::string& method,
           const std::string& metric, double value) {
    out_ << cell << ',' << rep << ',' << method << ',' << metric << ','
         << format_double(value) << '\n'
         << std::flush;  // partial results survive an interrupted run
    rows_.push_back({cell, method, metric, value});
  }
  struct Row {
    std::string cell, method, metric;
    double value;
  };
  const std::vector<Row>& rows() const { return rows_; }

 private:
  std::ofstream out_;
  std::vector<Row> rows_;
};

void write_summary(const fs::path& path, const ReplicateLog& log) {
  // group rows by (cell, method, metric), preserving first appearance order
  std::vector<std::tuple<std::string, std::string, std::string>> keys;
  std::map<std::tuple<std::string, std::string, std::string>, std::vector<double>> groups;
  for (const auto& row : log.rows()) {
    auto key = std::make_tuple(row.cell, row.method, row.metric);
    if (!groups.count(key)) keys.push_back(key);
    groups[key].push_back(row.value);
  }
  std::ostringstream os;
  os << "cell,method,metric,mean,sd,replicates\n";
  for (const auto& key : keys) {
    const arma::vec v(groups[key]);
    os << std::get<0>(key) << ',' << std::get<1>(key) << ',' << std::get<2>(key) << ','
       << format_double(arma::mean(v)) << ','
       << format_double(v.n_elem > 1 ? arma::stddev(v) : 0.0) << ',' << v.n_elem << '\n';
  }
  write_text_atomic(path, os.str());
}

std::uint64_t replicate_seed(std::uint64_t base, std::size_t cell, long long rep) {
  return splitmix64(splitmix64(base) ^ splitmix64(0x9e3779b9ULL * (cell + 1) + rep));
}

int run_benchmark(const BenchmarkArgs& args) {
  auto t0 = std::chrono::steady_clock::now();
  set_worker_threads(resolve_threads(args.threads));
  if (args.replicates < 1) throw std::invalid_argument("--replicates must be >= 1");
  const fs::path dir(args.out);
  fs::create_directories(dir);
  ReplicateLog log(dir / "replicates.csv");

  std::vector<BenchCell> cells;
  bool svr_mode = false;
  bool timing_mode = false;
  if (args.scenario == "1") {
    for (double s2 : {0.3, 0.5, 0.7})
      cells.push_back({"sigma2=" + format_double(s2),
                       mixed_spec(500, 500, s2, {0.05, 0.2, 0.1})});
  } else if (args.scenario == "2") {
    for (arma::uword n : {300, 500, 700})
      cells.push_back({"n=" + std::to_string(n) + ";p=500",
                       mixed_spec(n, 500, 0.7, {0.05, 0.2, 0.1})});
    for (arma::uword p : {300, 400})
      cells.push_back({"n=500;p=" + std::to_string(p),
                       mixed_spec(500, p, 0.7, {0.05, 0.2, 0.1})});
  } else if (args.scenario == "3") {
    for (double c : {0.75, 1.0, 1.5, 2.0})
      cells.push_back({"c=" + format_double(c),
                       mixed_spec(500, 500, 0.7, {0.05 * c, 0.2 * c, 0.1 * c})});
  } else if (args.scenario == "4") {
    svr_mode = true;
    for (double s2 : {0.1, 1.0, 3.0, 5.0})
      cells.push_back({"sigma2=" + format_double(s2),
                       mixed_spec(300, 300, s2, {0.4, 0.2, 0.5})});
  } else if (args.scenario == "8") {
    for (double s2 : {0.0, 0.5, 1.0}) {
      SimSpec g;
      g.n = 300, g.p = 300, g.q = 6;
      g.type_mix = {{VarKind::continuous, 300}};
      g.rho = {0.2};
      g.sigma2 = s2;
      cells.push_back({"gaussian;sigma2=" + format_double(s2), g});
      SimSpec pois = g;
      pois.type_mix = {{VarKind::count, 300}};
      pois.rho = {0.3};
      cells.push_back({"poisson;sigma2=" + format_double(s2), pois});
    }
  } else if (args.scenario == "timing") {
    timing_mode = true;
    for (arma::uword n : {500, 1000, 2000})
      cells.push_back({"vary_n;n=" + std::to_string(n) + ";p=500",
                       mixed_spec(n, 500, 0.7, {0.05, 0.2, 0.1})});
    for (arma::uword p : {500, 1000, 2000})
      cells.push_back({"vary_p;n=500;p=" + std::to_string(p),
                       mixed_spec(500, p, 0.7, {0.05, 0.2, 0.1})});
  } else {
    throw std::invalid_argument("--scenario must be one of 1, 2, 3, 4, 8, timing");
  }

  for (std::size_t c = 0; c < cells.size(); ++c) {
    const BenchCell& cell = cells[c];
    for (long long rep = 0; rep < args.replicates; ++rep) {
      SimSpec spec = cell.spec;
      spec.seed = replicate_seed(args.seed, c, rep);
      const SimulatedDataset sim = generate_dataset(spec);
      const CheckedData ds = validate(sim.data, sim.schema);

      if (svr_mode) {
        FitConfig config;
        const SvrReport report = select_num_factors(ds, 15, config);
        log.add(cell.label, rep, "overgfm", "q_hat", static_cast<double>(report.q_hat));
        log.add(cell.label, rep, "overgfm", "hit", report.q_hat == spec.q ? 1.0 : 0.0);
        if (std::isfinite(report.max_ratio))
          log.add(cell.label, rep, "overgfm", "max_ratio", report.max_ratio);
        continue;
      }

      FitConfig config;
      config.q = spec.q;
      if (timing_mode) {
        config.max_iter = 8;
        config.eps_elbo = 1e-300;  // run all 8 iterations
      }
      const FitResult result = fit(ds, config);
      if (timing_mode) {
        log.add(cell.label, rep, "overgfm", "per_iter_seconds",
                result.loop_seconds / static_cast<double>(result.iterations));
        continue;
      }
      log.add(cell.label, rep, "overgfm", "tr_h", trace_statistic(result.params.H, sim.H0));
      log.add(cell.label, rep, "overgfm", "tr_gamma",
              trace_statistic_upsilon(result.params.B, result.params.mu, sim.B0, sim.mu0));
      log.add(cell.label, rep, "overgfm", "seconds", result.init_seconds + result.loop_seconds);
      log.add(cell.label, rep, "overgfm", "iterations", static_cast<double>(result.iterations));
      log.add(cell.label, rep, "overgfm", "converged", result.converged ? 1.0 : 0.0);

      const LfmFit lfm = fit_lfm(ds.data.X, spec.q);
      log.add(cell.label, rep, "lfm", "tr_h", trace_statistic(lfm.H, sim.H0));
      log.add(cell.label, rep, "lfm", "tr_gamma",
              trace_statistic_upsilon(lfm.B, lfm.mu, sim.B0, sim.mu0));
    }
  }

  write_summary(dir / "summary.csv", log);
  json manifest;
  manifest["command"] = "benchmark";
  manifest["seed"] = args.seed;
  manifest["config"] = {{"scenario", args.scenario},
                        {"replicates", args.replicates},
                        {"threads", worker_threads()}};
  manifest["outputs"] = {{"replicates", (dir / "replicates.csv").string()},
                         {"summary", (dir / "summary.csv").string()}};
  write_manifest(dir, std::move(manifest), wall_seconds_since(t0));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Overdispersed generalized factor model toolkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  SimulateArgs sim_args;
  CLI::App* sim = app.add_subcommand("simulate", "Generate a synthetic mixed-type dataset");
  sim->add_option("--n", sim_args.n, "rows")->required();
  sim->add_option("--p", sim_args.p, "columns")->required();
  sim->add_option("--q", sim_args.q, "factors")->required();
  sim->add_option("--types", sim_args.types, "kind:count blocks, e.g. continuous:50,count:50")
      ->required();
  sim->add_option("--rho", sim_args.rho, "signal strength per block, e.g. 0.2,0.3")->required();
  sim->add_option("--sigma2", sim_args.sigma2, "overdispersion variance");
  sim->add_option("--noise", sim_args.noise, "gaussian or t:DF");
  sim->add_option("--mu-scale", sim_args.mu_scale, "intercept scale");
  sim->add_option("--trials", sim_args.trials, "binomial trial count");
  sim->add_option("--seed", sim_args.seed, "rng seed");
  sim->add_option("--out", sim_args.out, "output directory")->required();

  FitArgs fit_args;
  CLI::App* fitcmd = app.add_subcommand("fit", "Fit the factor model");
  fitcmd->add_option("--data", fit_args.data, "data csv")->required();
  fitcmd->add_option("--schema", fit_args.schema, "schema csv")->required();
  std::string fit_offsets, fit_seed_text;
  fitcmd->add_option("--offsets", fit_offsets, "per-row offsets file");
  fitcmd->add_option("--q", fit_args.q, "number of factors")->required();
  fitcmd->add_option("--max-iter", fit_args.max_iter, "iteration cap");
  fitcmd->add_option("--eps-elbo", fit_args.eps_elbo, "relative ELBO tolerance");
  int fit_threads = -1;
  fitcmd->add_option("--threads", fit_threads, "worker threads (0 = all cores)");
  fitcmd->add_option("--seed", fit_seed_text, "seed recorded in the manifest");
  fitcmd->add_option("--out", fit_args.out, "output directory")->required();

  SelectQArgs sq_args;
  CLI::App* sq = app.add_subcommand("select-q", "Choose the number of factors");
  sq->add_option("--data", sq_args.data, "data csv")->required();
  sq->add_option("--schema", sq_args.schema, "schema csv")->required();
  sq->add_option("--q-max", sq_args.q_max, "largest candidate");
  sq->add_option("--max-iter", sq_args.max_iter, "iteration cap");
  sq->add_option("--eps-elbo", sq_args.eps_elbo, "relative ELBO tolerance");
  int sq_threads = -1;
  sq->add_option("--threads", sq_threads, "worker threads (0 = all cores)");
  sq->add_option("--out", sq_args.out, "output directory")->required();

  EvaluateArgs ev_args;
  CLI::App* ev = app.add_subcommand("evaluate", "Trace statistics against ground truth");
  std::string est_h, true_h, est_b, est_mu, true_b, true_mu;
  ev->add_option("--est-h", est_h, "estimated factor scores");
  ev->add_option("--true-h", true_h, "true factor scores");
  ev->add_option("--est-b", est_b, "estimated loadings");
  ev->add_option("--est-mu", est_mu, "estimated intercepts");
  ev->add_option("--true-b", true_b, "true loadings");
  ev->add_option("--true-mu", true_mu, "true intercepts");
  ev->add_option("--out", ev_args.out, "output directory")->required();

  BenchmarkArgs bm_args;
  CLI::App* bm = app.add_subcommand("benchmark", "Replicated simulation studies");
  bm->add_option("--scenario", bm_args.scenario, "1, 2, 3, 4, 8 or timing")->required();
  bm->add_option("--replicates", bm_args.replicates, "replicates per cell");
  bm->add_option("--seed", bm_args.seed, "base seed");
  int bm_threads = -1;
  bm->add_option("--threads", bm_threads, "worker threads (0 = all cores)");
  bm->add_option("--out", bm_args.out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*sim) return run_simulate(sim_args);
    if (*fitcmd) {
      if (!fit_offsets.empty()) fit_args.offsets = fit_offsets;
      if (fit_threads >= 0) fit_args.threads = fit_threads;
      if (!fit_seed_text.empty()) fit_args.seed = std::stoull(fit_seed_text);
      return run_fit(fit_args);
    }
    if (*sq) {
      if (sq_threads >= 0) sq_args.threads = sq_threads;
      return run_select_q(sq_args);
    }
    if (*ev) {
      if (!est_h.empty()) ev_args.est_h = est_h;
      if (!true_h.empty()) ev_args.true_h = true_h;
      if (!est_b.empty()) ev_args.est_b = est_b;
      if (!est_mu.empty()) ev_args.est_mu = est_mu;
      if (!true_b.empty()) ev_args.true_b = true_b;
      if (!true_mu.empty()) ev_args.true_mu = true_mu;
      return run_evaluate(ev_args);
    }
    if (*bm) {
      if (bm_threads >= 0) bm_args.threads = bm_threads;
      return run_benchmark(bm_args);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

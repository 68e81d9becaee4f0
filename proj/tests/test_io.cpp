#include "overgfm/io.hpp"

#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace overgfm;
namespace fs = std::filesystem;

namespace {

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() /
          ("overgfm-test-" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  fs::path operator/(const char* name) const { return dir / name; }
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("format_double renders shortest round-trip decimals") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  for (int k = 0; k < 200; ++k) {
    const double v = normal(rng) * std::pow(10.0, int(k % 17) - 8);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-0.5) == "-0.5");
}

TEST_CASE("matrix csv round-trips bitwise with header") {
  Scratch tmp;
  arma::mat M(5, 3);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  for (auto& v : M) v = normal(rng);
  save_matrix_csv(tmp / "m.csv", M, std::vector<std::string>{"u", "v", "w"});
  std::vector<std::string> header;
  const arma::mat back = load_matrix_csv(tmp / "m.csv", &header);
  REQUIRE(header.size() == 3);
  CHECK(header[1] == "v");
  REQUIRE(back.n_rows == 5);
  REQUIRE(back.n_cols == 3);
  CHECK(arma::approx_equal(back, M, "absdiff", 0.0));
}

TEST_CASE("matrix csv stem header numbers the columns") {
  Scratch tmp;
  save_matrix_csv(tmp / "m.csv", arma::mat(2, 2, arma::fill::ones), "b");
  std::vector<std::string> header;
  load_matrix_csv(tmp / "m.csv", &header);
  REQUIRE(header.size() == 2);
  CHECK(header[0] == "b1");
  CHECK(header[1] == "b2");
}

TEST_CASE("load errors carry path and line context") {
  Scratch tmp;
  {
    std::ofstream out(tmp / "bad.csv");
    out << "a,b\n1,2\n3,oops\n";
  }
  try {
    load_matrix_csv(tmp / "bad.csv");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("bad.csv") != std::string::npos);
    CHECK(msg.find(":3") != std::string::npos);  // 1-based line of the bad cell
  }
}

TEST_CASE("ragged rows are rejected") {
  Scratch tmp;
  {
    std::ofstream out(tmp / "ragged.csv");
    out << "a,b\n1,2\n3\n";
  }
  CHECK_THROWS_AS(load_matrix_csv(tmp / "ragged.csv"), DataError);
}

TEST_CASE("missing file is a data error") {
  Scratch tmp;
  CHECK_THROWS_AS(load_matrix_csv(tmp / "absent.csv"), DataError);
}

TEST_CASE("vector csv round-trips") {
  Scratch tmp;
  const arma::vec v{1.5, -2.25, 0.0, 1e-17};
  save_vector_csv(tmp / "v.csv", v, "mu");
  const arma::vec back = load_vector_csv(tmp / "v.csv");
  CHECK(arma::approx_equal(back, v, "absdiff", 0.0));
}

TEST_CASE("schema csv round-trips all kinds") {
  Scratch tmp;
  VariableSchema schema;
  schema.columns = {{"x1", VarKind::continuous, 1},
                    {"x2", VarKind::count, 1},
                    {"x3", VarKind::binomial, 4}};
  save_schema(tmp / "schema.csv", schema);
  const VariableSchema back = load_schema(tmp / "schema.csv");
  REQUIRE(back.p() == 3);
  CHECK(back.columns[0].kind == VarKind::continuous);
  CHECK(back.columns[1].kind == VarKind::count);
  CHECK(back.columns[2].kind == VarKind::binomial);
  CHECK(back.columns[2].trials == 4);
  CHECK(back.columns[2].name == "x3");
}

TEST_CASE("schema csv rejects malformed trials") {
  Scratch tmp;
  {
    std::ofstream out(tmp / "s1.csv");
    out << "name,kind,trials\nx1,binomial,\n";  // binomial requires trials
  }
  CHECK_THROWS_AS(load_schema(tmp / "s1.csv"), DataError);
  {
    std::ofstream out(tmp / "s2.csv");
    out << "name,kind,trials\nx1,continuous,3\n";  // trials only for binomial
  }
  CHECK_THROWS_AS(load_schema(tmp / "s2.csv"), DataError);
}

TEST_CASE("offsets file round-trips without header") {
  Scratch tmp;
  const arma::vec a{0.25, -1.0, 3.5};
  save_offsets(tmp / "offsets.txt", a);
  const arma::vec back = load_offsets(tmp / "offsets.txt");
  CHECK(arma::approx_equal(back, a, "absdiff", 0.0));
  const std::string text = slurp(tmp / "offsets.txt");
  CHECK(text.find("offset") == std::string::npos);  // plain values, no header
}

TEST_CASE("data csv writes schema names as the header") {
  Scratch tmp;
  VariableSchema schema;
  schema.columns = {{"alpha", VarKind::continuous, 1}, {"beta", VarKind::count, 1}};
  MixedDataMatrix data;
  data.X = {{0.5, 3.0}, {-1.25, 0.0}};
  save_data_csv(tmp / "data.csv", data, schema);
  std::vector<std::string> header;
  const arma::mat back = load_matrix_csv(tmp / "data.csv", &header);
  REQUIRE(header.size() == 2);
  CHECK(header[0] == "alpha");
  CHECK(header[1] == "beta");
  CHECK(arma::approx_equal(back, data.X, "absdiff", 0.0));
}

TEST_CASE("windows line endings are tolerated") {
  Scratch tmp;
  {
    std::ofstream out(tmp / "crlf.csv", std::ios::binary);
    out << "a,b\r\n1,2\r\n3,4\r\n";
  }
  const arma::mat back = load_matrix_csv(tmp / "crlf.csv");
  CHECK(back(1, 1) == 4.0);
}

TEST_CASE("write_text_atomic replaces content and leaves no temp file") {
  Scratch tmp;
  write_text_atomic(tmp / "t.txt", "first\n");
  write_text_atomic(tmp / "t.txt", "second\n");
  CHECK(slurp(tmp / "t.txt") == "second\n");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(tmp.dir)) ++entries;
  CHECK(entries == 1);
}

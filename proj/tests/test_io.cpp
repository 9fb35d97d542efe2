#include <Eigen/Dense>
#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "lassoscreen/config.hpp"
#include "lassoscreen/errors.hpp"
#include "lassoscreen/matrix_io.hpp"
#include "lassoscreen/rng.hpp"

using Eigen::MatrixXd;
using namespace lassoscreen;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/lassoscreen_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

MatrixXd random_matrix(int rows, int cols, std::uint64_t seed) {
  Rng rng(seed);
  MatrixXd m(rows, cols);
  for (int c = 0; c < cols; ++c) m.col(c) = rng.gaussian_vector(rows);
  return m;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::trunc);
  f << content;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("raw round trip is bit exact") {
  const MatrixXd m = random_matrix(7, 5, 42);
  TempFile file("raw.bin");
  save_matrix(file.path, m, MatrixFormat::raw_float64);
  const MatrixXd loaded = load_matrix(file.path);
  CHECK(loaded.rows() == 7);
  CHECK(loaded.cols() == 5);
  CHECK((loaded.array() == m.array()).all());
}

TEST_CASE("text round trip is bit exact through 17 significant digits") {
  const MatrixXd m = random_matrix(4, 6, 43);
  TempFile file("text.txt");
  save_matrix(file.path, m, MatrixFormat::delimited_text);
  const MatrixXd loaded = load_matrix(file.path);
  CHECK((loaded.array() == m.array()).all());
}

TEST_CASE("text format: header then column-major elements") {
  TempFile file("manual.txt");
  write_text(file.path, "3 2\n1 2 3\n4 5 6\n");
  const MatrixXd m = load_matrix(file.path);
  CHECK(m.rows() == 3);
  CHECK(m.cols() == 2);
  CHECK(m(0, 0) == 1.0);
  CHECK(m(2, 0) == 3.0);  // column-major stream
  CHECK(m(0, 1) == 4.0);
}

TEST_CASE("load errors carry distinct codes") {
  CHECK_THROWS_WITH_AS(load_matrix("/tmp/definitely_missing_file_9a1"),
                       doctest::Contains("cannot open"), IoError);
  try {
    load_matrix("/tmp/definitely_missing_file_9a1");
  } catch (const IoError& e) {
    CHECK(e.code() == IoCode::missing_file);
  }

  TempFile bad_header("badheader.txt");
  write_text(bad_header.path, "x y\n1 2\n");
  try {
    load_matrix(bad_header.path);
    CHECK(false);
  } catch (const IoError& e) {
    CHECK(e.code() == IoCode::bad_header);
  }

  TempFile short_file("short.txt");
  write_text(short_file.path, "2 2\n1 2 3\n");
  try {
    load_matrix(short_file.path);
    CHECK(false);
  } catch (const IoError& e) {
    CHECK(e.code() == IoCode::shape_mismatch);
  }

  TempFile extra("extra.txt");
  write_text(extra.path, "2 2\n1 2 3 4 5\n");
  try {
    load_matrix(extra.path);
    CHECK(false);
  } catch (const IoError& e) {
    CHECK(e.code() == IoCode::shape_mismatch);
  }

  TempFile nonfinite("nan.txt");
  write_text(nonfinite.path, "2 1\n1 nan\n");
  try {
    load_matrix(nonfinite.path);
    CHECK(false);
  } catch (const IoError& e) {
    CHECK(e.code() == IoCode::non_finite);
  }

  TempFile truncated("trunc.bin");
  save_matrix(truncated.path, random_matrix(4, 4, 1), MatrixFormat::raw_float64);
  {
    std::ifstream in(truncated.path, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    bytes.resize(bytes.size() - 8);
    std::ofstream out(truncated.path, std::ios::binary | std::ios::trunc);
    out << bytes;
  }
  try {
    load_matrix(truncated.path);
    CHECK(false);
  } catch (const IoError& e) {
    CHECK(e.code() == IoCode::shape_mismatch);
  }
}

TEST_CASE("load_instance wires shapes, normalization and lambda") {
  TempFile dict("inst_dict.txt");
  TempFile target("inst_target.txt");
  // 3x2 dictionary, column-major; second column has norm 2.
  write_text(dict.path, "3 2\n1 0 0\n0 2 0\n");
  write_text(target.path, "3 1\n1 1 0\n");
  const LassoInstance inst = load_instance(dict.path, target.path, 0.5);
  CHECK(inst.dictionary.col(0).norm() == doctest::Approx(1.0));
  CHECK(inst.dictionary.col(1).norm() == doctest::Approx(1.0));
  CHECK(inst.column_scales[1] == doctest::Approx(2.0));
  CHECK(inst.lambda_max == doctest::Approx(1.0));  // both columns correlate at 1
  CHECK(inst.lambda == doctest::Approx(0.5));

  // Shape mismatch: target length disagrees.
  TempFile bad_target("inst_bad_target.txt");
  write_text(bad_target.path, "2 1\n1 1\n");
  try {
    load_instance(dict.path, bad_target.path, 0.5);
    CHECK(false);
  } catch (const IoError& e) {
    CHECK(e.code() == IoCode::shape_mismatch);
  }

  // Zero column names its index.
  TempFile zero_dict("inst_zero.txt");
  write_text(zero_dict.path, "3 2\n1 0 0\n0 0 0\n");
  try {
    load_instance(zero_dict.path, target.path, 0.5);
    CHECK(false);
  } catch (const IoError& e) {
    CHECK(e.code() == IoCode::zero_column);
    CHECK(std::string(e.what()).find("index 1") != std::string::npos);
  }
}

TEST_CASE("config: parsing, comments, overrides and validation") {
  TempFile cfg_file("config.cfg");
  write_text(cfg_file.path,
             "# comment line\n"
             "lambda_ratio = 0.4\n"
             "m=3\n"
             "seed = 77   # trailing comment\n"
             "dict = /tmp/some_dict.bin\n"
             "\n");
  const Config cfg = load_config_file(cfg_file.path);
  CHECK(cfg.lambda_ratio == 0.4);
  CHECK(cfg.m == 3);
  CHECK(cfg.seed == 77);
  CHECK(cfg.dict == "/tmp/some_dict.bin");
  CHECK(cfg.p == 500);  // untouched default
  CHECK_NOTHROW(cfg.validate());

  Config bad = cfg;
  bad.lambda_ratio = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.parallelism = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  Config c2;
  CHECK_THROWS_AS(apply_key_value(c2, "unknown_key", "1"), std::invalid_argument);
  CHECK_THROWS_AS(apply_key_value(c2, "m", "three"), std::invalid_argument);

  TempFile bad_line("config_bad.cfg");
  write_text(bad_line.path, "just a line without equals\n");
  CHECK_THROWS_AS(load_config_file(bad_line.path), std::invalid_argument);
}

}  // TEST_SUITE

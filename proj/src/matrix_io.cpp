#include "lassoscreen/matrix_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>

namespace lassoscreen {

static_assert(std::endian::native == std::endian::little,
              "raw matrix format assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'L', 'S', 'M', 'X', '0', '0', '0', '1'};
constexpr std::uint64_t kMaxDim = 1u << 30;

void check_finite(const Eigen::MatrixXd& m, const std::string& path) {
  if (!m.allFinite())
    throw IoError(IoCode::non_finite, path + ": matrix contains NaN or Inf");
}

Eigen::MatrixXd load_raw(std::ifstream& file, const std::string& path) {
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  file.read(reinterpret_cast<char*>(&rows), sizeof(rows));
  file.read(reinterpret_cast<char*>(&cols), sizeof(cols));
  if (!file || rows == 0 || cols == 0 || rows > kMaxDim || cols > kMaxDim)
    throw IoError(IoCode::bad_header, path + ": malformed raw header");

  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  file.read(reinterpret_cast<char*>(m.data()),
            static_cast<std::streamsize>(sizeof(double) * rows * cols));
  if (!file)
    throw IoError(IoCode::shape_mismatch,
                  path + ": fewer elements than the declared shape");
  if (file.peek() != std::char_traits<char>::eof())
    throw IoError(IoCode::shape_mismatch,
                  path + ": trailing bytes after the declared shape");
  check_finite(m, path);
  return m;
}

Eigen::MatrixXd load_text(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw IoError(IoCode::missing_file, path + ": cannot open");
  long long rows = 0;
  long long cols = 0;
  if (!(file >> rows >> cols) || rows <= 0 || cols <= 0 ||
      rows > static_cast<long long>(kMaxDim) || cols > static_cast<long long>(kMaxDim))
    throw IoError(IoCode::bad_header, path + ": malformed text header (rows cols)");

  Eigen::MatrixXd m(rows, cols);
  // Element stream is column-major, matching the raw layout. Tokens go
  // through strtod so nan/inf literals reach the finiteness check instead of
  // failing the stream.
  std::string token;
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (!(file >> token))
        throw IoError(IoCode::shape_mismatch,
                      path + ": fewer elements than the declared shape");
      char* end = nullptr;
      m(r, c) = std::strtod(token.c_str(), &end);
      if (end == token.c_str() || *end != '\0')
        throw IoError(IoCode::shape_mismatch, path + ": bad element '" + token + "'");
    }
  }
  std::string extra;
  if (file >> extra)
    throw IoError(IoCode::shape_mismatch, path + ": trailing data after the declared shape");
  check_finite(m, path);
  return m;
}

}  // namespace

void save_matrix(const std::string& path, const Eigen::MatrixXd& matrix, MatrixFormat format) {
  if (format == MatrixFormat::raw_float64) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError(IoCode::write_failed, path + ": cannot open for writing");
    const std::uint64_t rows = static_cast<std::uint64_t>(matrix.rows());
    const std::uint64_t cols = static_cast<std::uint64_t>(matrix.cols());
    file.write(kMagic, sizeof(kMagic));
    file.write(reinterpret_cast<const char*>(&rows), sizeof(rows));
    file.write(reinterpret_cast<const char*>(&cols), sizeof(cols));
    file.write(reinterpret_cast<const char*>(matrix.data()),
               static_cast<std::streamsize>(sizeof(double) * rows * cols));
    if (!file) throw IoError(IoCode::write_failed, path + ": write failed");
    return;
  }

  std::ofstream file(path, std::ios::trunc);
  if (!file) throw IoError(IoCode::write_failed, path + ": cannot open for writing");
  file << matrix.rows() << ' ' << matrix.cols() << '\n';
  char buf[64];
  for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
    for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
      std::snprintf(buf, sizeof(buf), "%.17g", matrix(r, c));
      file << buf << '\n';
    }
  }
  if (!file) throw IoError(IoCode::write_failed, path + ": write failed");
}

Eigen::MatrixXd load_matrix(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError(IoCode::missing_file, path + ": cannot open");
  char head[8] = {};
  file.read(head, sizeof(head));
  if (file.gcount() == 8 && std::memcmp(head, kMagic, 8) == 0) return load_raw(file, path);
  return load_text(path);
}

LassoInstance load_instance(const std::string& dict_path, const std::string& target_path,
                            double lambda_ratio) {
  if (!(lambda_ratio > 0.0) || lambda_ratio > 1.0)
    throw std::invalid_argument("load_instance: lambda_ratio must be in (0, 1]");
  Eigen::MatrixXd dict = load_matrix(dict_path);
  const Eigen::MatrixXd target = load_matrix(target_path);
  if (target.cols() != 1)
    throw IoError(IoCode::shape_mismatch, target_path + ": target must have one column");
  if (target.rows() != dict.rows())
    throw IoError(IoCode::shape_mismatch,
                  target_path + ": target length does not match dictionary rows");

  LassoInstance inst;
  inst.column_scales.resize(dict.cols());
  for (Eigen::Index i = 0; i < dict.cols(); ++i) {
    const double nrm = dict.col(i).norm();
    if (nrm < 1e-12)
      throw IoError(IoCode::zero_column,
                    dict_path + ": zero column at index " + std::to_string(i));
    inst.column_scales[i] = nrm;
    dict.col(i) /= nrm;
  }
  inst.dictionary = std::move(dict);
  inst.target = target.col(0);
  inst.lambda_max = compute_lambda_max(inst.dictionary, inst.target).value;
  if (inst.lambda_max <= 0.0)
    throw NumericalError(dict_path + ": lambda_max is zero (target orthogonal to dictionary)");
  inst.lambda = lambda_ratio * inst.lambda_max;
  return inst;
}

}  // namespace lassoscreen

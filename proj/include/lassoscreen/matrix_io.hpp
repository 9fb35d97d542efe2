#pragma once

#include <Eigen/Dense>
#include <string>

#include "lassoscreen/errors.hpp"
#include "lassoscreen/lasso.hpp"

namespace lassoscreen {

enum class MatrixFormat { delimited_text, raw_float64 };

/// File layout (see docs/FORMATS.md):
///   raw:  8-byte magic "LSMX0001", two uint64 little-endian dims (rows,
///         cols), then rows*cols float64 little-endian, column-major.
///   text: first line "rows cols", then rows*cols whitespace-separated
///         values in column-major order.
void save_matrix(const std::string& path, const Eigen::MatrixXd& matrix, MatrixFormat format);

/// Sniffs the magic bytes and dispatches to the raw or text reader. Throws
/// IoError with a distinct code for a missing file, malformed header, element
/// count mismatch, or non-finite values.
Eigen::MatrixXd load_matrix(const std::string& path);

/// Loads dictionary and target (a single-column matrix with matching row
/// count), normalizes columns (IoError::zero_column names the offending
/// index), and sets lambda = lambda_ratio * lambda_max. Throws NumericalError
/// when lambda_max is zero (target orthogonal to every column).
LassoInstance load_instance(const std::string& dict_path, const std::string& target_path,
                            double lambda_ratio);

}  // namespace lassoscreen

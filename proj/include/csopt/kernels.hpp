#pragma once

#include "csopt/matrix.hpp"

// Dense kernels used throughout the library. The default entry points are
// OpenMP-parallel; kernels::serial holds plain single-threaded references.
//
// Every parallel loop assigns whole output entries (or columns) to one
// thread and accumulates in the same order as the serial code, so results
// are bitwise identical to the reference at any thread count. The harness
// relies on that for reproducible experiment output.

namespace csopt::kernels {

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

// a^T a with the upper triangle computed and mirrored; output is exactly
// symmetric.
Matrix gram_of_columns(const Matrix& a);

std::vector<double> column_norms(const Matrix& a);

// Scales each column to unit Euclidean norm. Throws ZeroColumn if a column
// norm is <= tol.
Matrix normalize_columns(const Matrix& a, double tol = 1e-300);

namespace serial {

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
Matrix gram_of_columns(const Matrix& a);
std::vector<double> column_norms(const Matrix& a);
Matrix normalize_columns(const Matrix& a, double tol = 1e-300);

}  // namespace serial

}  // namespace csopt::kernels

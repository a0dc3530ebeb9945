#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace csopt {

// Dense real matrix, row-major storage.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    std::vector<double>& storage() { return data_; }
    const std::vector<double>& storage() const { return data_; }

    bool all_finite() const;

    static Matrix identity(std::size_t n);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Text format: first line "rows cols", then entries in row-major order
// separated by whitespace, written with 17 significant digits so that
// write/read round-trips reproduce every double bit-for-bit.
void write_matrix(std::ostream& os, const Matrix& a);
void write_matrix_file(const std::string& path, const Matrix& a);
Matrix read_matrix(std::istream& is, const std::string& origin = "<stream>");
Matrix read_matrix_file(const std::string& path);

std::string format_real(double v);  // shortest 17-significant-digit form

}  // namespace csopt

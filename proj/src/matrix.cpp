#include "csopt/matrix.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <utility>

#include "csopt/errors.hpp"

namespace csopt {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols)
        throw BadParameter("matrix storage size does not match rows*cols");
}

bool Matrix::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

Matrix Matrix::identity(std::size_t n) {
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) a(i, i) = 1.0;
    return a;
}

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_matrix(std::ostream& os, const Matrix& a) {
    os << a.rows() << ' ' << a.cols() << '\n';
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (j) os << ' ';
            os << format_real(a(i, j));
        }
        os << '\n';
    }
}

void write_matrix_file(const std::string& path, const Matrix& a) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open for writing: " + path);
    write_matrix(f, a);
    f.flush();
    if (!f) throw IoError("write failed: " + path);
}

Matrix read_matrix(std::istream& is, const std::string& origin) {
    long long rows = -1, cols = -1;
    if (!(is >> rows >> cols) || rows < 0 || cols < 0)
        throw ParseError(origin + ": expected header 'rows cols'");
    Matrix a(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
    for (std::size_t idx = 0; idx < a.size(); ++idx) {
        std::string tok;
        if (!(is >> tok))
            throw ParseError(origin + ": expected " + std::to_string(a.size()) +
                             " entries, got " + std::to_string(idx));
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0')
            throw ParseError(origin + ": bad number '" + tok + "'");
        if (!std::isfinite(v))
            throw ParseError(origin + ": non-finite entry '" + tok + "'");
        a.storage()[idx] = v;
    }
    return a;
}

Matrix read_matrix_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open: " + path);
    return read_matrix(f, path);
}

}  // namespace csopt

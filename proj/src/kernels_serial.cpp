#include <cmath>

#include "csopt/errors.hpp"
#include "csopt/kernels.hpp"

// Reference implementations. Kept deliberately plain; the parallel kernels
// must reproduce these bit-for-bit.

namespace csopt::kernels::serial {

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw BadParameter("matmul: inner dimensions differ");
    const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
    Matrix c(m, n);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t t = 0; t < k; ++t) s += a(i, t) * b(t, j);
            c(i, j) = s;
        }
    }
    return c;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

Matrix gram_of_columns(const Matrix& a) {
    const std::size_t n = a.rows(), N = a.cols();
    Matrix g(N, N);
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = i; j < N; ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < n; ++r) s += a(r, i) * a(r, j);
            g(i, j) = s;
            g(j, i) = s;
        }
    }
    return g;
}

std::vector<double> column_norms(const Matrix& a) {
    std::vector<double> norms(a.cols(), 0.0);
    for (std::size_t j = 0; j < a.cols(); ++j) {
        double s = 0.0;
        for (std::size_t r = 0; r < a.rows(); ++r) s += a(r, j) * a(r, j);
        norms[j] = std::sqrt(s);
    }
    return norms;
}

Matrix normalize_columns(const Matrix& a, double tol) {
    const std::vector<double> norms = column_norms(a);
    for (std::size_t j = 0; j < norms.size(); ++j)
        if (!(norms[j] > tol)) throw ZeroColumn("normalize_columns: zero column", j);
    Matrix out(a.rows(), a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) {
        const double inv = 1.0 / norms[j];
        for (std::size_t r = 0; r < a.rows(); ++r) out(r, j) = a(r, j) * inv;
    }
    return out;
}

}  // namespace csopt::kernels::serial

#include "csopt/kernels.hpp"

#include <cmath>

#include "csopt/errors.hpp"

namespace csopt::kernels {

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw BadParameter("matmul: inner dimensions differ");
    const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
    Matrix c(m, n);
    const double* pa = a.data();
    const double* pb = b.data();
    double* pc = c.data();
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(m); ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t t = 0; t < k; ++t) s += pa[i * k + t] * pb[t * n + j];
            pc[i * n + j] = s;
        }
    }
    return c;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(a.rows()); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, static_cast<std::size_t>(i)) = a(static_cast<std::size_t>(i), j);
    return t;
}

Matrix gram_of_columns(const Matrix& a) {
    const std::size_t n = a.rows(), N = a.cols();
    Matrix g(N, N);
    const double* p = a.data();
    double* pg = g.data();
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(N); ++i) {
        for (std::size_t j = static_cast<std::size_t>(i); j < N; ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < n; ++r) s += p[r * N + i] * p[r * N + j];
            pg[i * N + j] = s;
            pg[j * N + static_cast<std::size_t>(i)] = s;
        }
    }
    return g;
}

std::vector<double> column_norms(const Matrix& a) {
    const std::size_t n = a.rows(), N = a.cols();
    std::vector<double> norms(N, 0.0);
    const double* p = a.data();
#pragma omp parallel for schedule(static)
    for (long long j = 0; j < static_cast<long long>(N); ++j) {
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double v = p[r * N + static_cast<std::size_t>(j)];
            s += v * v;
        }
        norms[static_cast<std::size_t>(j)] = std::sqrt(s);
    }
    return norms;
}

Matrix normalize_columns(const Matrix& a, double tol) {
    const std::vector<double> norms = column_norms(a);
    for (std::size_t j = 0; j < norms.size(); ++j)
        if (!(norms[j] > tol)) throw ZeroColumn("normalize_columns: zero column", j);
    const std::size_t n = a.rows(), N = a.cols();
    Matrix out(n, N);
    const double* p = a.data();
    double* q = out.data();
#pragma omp parallel for schedule(static)
    for (long long j = 0; j < static_cast<long long>(N); ++j) {
        const double inv = 1.0 / norms[static_cast<std::size_t>(j)];
        for (std::size_t r = 0; r < n; ++r)
            q[r * N + static_cast<std::size_t>(j)] = p[r * N + static_cast<std::size_t>(j)] * inv;
    }
    return out;
}

}  // namespace csopt::kernels

// Timing comparison of the OpenMP matrix kernels against the serial
// reference, with a bitwise equality check on every output.

#include <chrono>
#include <cstdio>
#include <cstring>

#include <omp.h>

#include "csopt/kernels.hpp"
#include "csopt/matrix.hpp"
#include "csopt/rng.hpp"

using namespace csopt;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Rng rng(seed);
    Matrix a(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) a(i, j) = rng.normal();
    return a;
}

bool bitwise_equal(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    return std::memcmp(a.data(), b.data(), sizeof(double) * a.rows() * a.cols()) == 0;
}

template <class F>
double time_best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

}  // namespace

int main() {
    std::printf("threads=%d\n", omp_get_max_threads());
    const int reps = 5;

    for (std::size_t n : {64, 128, 256, 512}) {
        const Matrix a = random_matrix(n, n, 0x1234 + n);
        const Matrix b = random_matrix(n, n, 0x9876 + n);

        Matrix par_mm(1, 1), ser_mm(1, 1);
        const double t_par_mm = time_best_of(reps, [&] { par_mm = kernels::matmul(a, b); });
        const double t_ser_mm = time_best_of(reps, [&] { ser_mm = kernels::serial::matmul(a, b); });
        const bool ok_mm = bitwise_equal(par_mm, ser_mm);

        Matrix par_g(1, 1), ser_g(1, 1);
        const double t_par_g = time_best_of(reps, [&] { par_g = kernels::gram_of_columns(a); });
        const double t_ser_g = time_best_of(reps, [&] { ser_g = kernels::serial::gram_of_columns(a); });
        const bool ok_g = bitwise_equal(par_g, ser_g);

        std::printf("n=%zu matmul omp=%.3fms serial=%.3fms speedup=%.2fx bitwise=%s\n", n, t_par_mm,
                    t_ser_mm, t_ser_mm / t_par_mm, ok_mm ? "equal" : "MISMATCH");
        std::printf("n=%zu gram   omp=%.3fms serial=%.3fms speedup=%.2fx bitwise=%s\n", n, t_par_g,
                    t_ser_g, t_ser_g / t_par_g, ok_g ? "equal" : "MISMATCH");
        if (!ok_mm || !ok_g) return 1;
    }
    return 0;
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <vector>

#include "csopt/dictionaries.hpp"
#include "csopt/errors.hpp"
#include "csopt/matops.hpp"
#include "csopt/recovery.hpp"
#include "csopt/rng.hpp"

using namespace csopt;

namespace {

std::vector<double> matvec(const Matrix& a, const std::vector<double>& v) {
    std::vector<double> out(a.rows(), 0.0);
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) out[i] += a(i, j) * v[j];
    return out;
}

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

std::vector<double> residual(const Matrix& de, const std::vector<double>& y,
                             const SparseSignal& gamma) {
    const std::vector<double> yhat = matvec(de, to_dense(gamma));
    std::vector<double> r(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) r[i] = y[i] - yhat[i];
    return r;
}

}  // namespace

TEST_CASE("sparse signals honor their contract") {
    const SparseSignal s = gen_sparse_signal(64, 4, 9);
    CHECK(s.dim == 64);
    CHECK(s.support.size() == 4);
    CHECK(s.coeffs.size() == 4);
    for (std::size_t i = 0; i < s.support.size(); ++i) {
        CHECK(s.support[i] < 64);
        if (i > 0) CHECK(s.support[i] > s.support[i - 1]);
        CHECK(std::abs(s.coeffs[i]) >= 1e-3);
    }
}

TEST_CASE("sparse signal generation is deterministic and seed sensitive") {
    const SparseSignal a = gen_sparse_signal(32, 5, 77);
    const SparseSignal b = gen_sparse_signal(32, 5, 77);
    CHECK(a.support == b.support);
    CHECK(a.coeffs == b.coeffs);
    const SparseSignal c = gen_sparse_signal(32, 5, 78);
    CHECK((a.support != c.support || a.coeffs != c.coeffs));
}

TEST_CASE("zero sparsity gives the empty signal") {
    const SparseSignal s = gen_sparse_signal(16, 0, 1);
    CHECK(s.dim == 16);
    CHECK(s.support.empty());
    CHECK(s.coeffs.empty());
    const std::vector<double> dense = to_dense(s);
    CHECK(dense.size() == 16);
    for (double v : dense) CHECK(v == 0.0);
}

TEST_CASE("sparse signal parameters are validated") {
    CHECK_THROWS_AS(gen_sparse_signal(0, 0, 1), BadParameter);
    CHECK_THROWS_AS(gen_sparse_signal(8, 9, 1), BadParameter);
}

TEST_CASE("dense expansion places coefficients on the support") {
    SparseSignal s;
    s.dim = 6;
    s.support = {1, 4};
    s.coeffs = {2.5, -1.25};
    const std::vector<double> d = to_dense(s);
    CHECK(d == std::vector<double>{0.0, 2.5, 0.0, 0.0, -1.25, 0.0});
}

TEST_CASE("reconstruction through the identity is the dense expansion") {
    const SparseSignal s = gen_sparse_signal(10, 3, 5);
    const std::vector<double> x = reconstruct(Matrix::identity(10), s);
    CHECK(x == to_dense(s));
}

TEST_CASE("reconstruction is the dictionary-vector product") {
    const Dictionary dict = gaussian_dictionary(8, 20, 3);
    const SparseSignal s = gen_sparse_signal(20, 4, 6);
    const std::vector<double> a = reconstruct(dict.atoms, s);
    const std::vector<double> b = matvec(dict.atoms, to_dense(s));
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-12);
    SparseSignal wrong = s;
    wrong.dim = 21;
    CHECK_THROWS_AS(reconstruct(dict.atoms, wrong), BadParameter);
}

TEST_CASE("mean squared error basics") {
    const std::vector<double> a{1.0, 2.0, 3.0};
    CHECK(mse(a, a) == 0.0);
    CHECK(mse({0.0, 0.0}, {3.0, 4.0}) == doctest::Approx(12.5).epsilon(1e-15));
    // scaling both inputs scales the error quadratically
    CHECK(mse({2.0, 4.0}, {6.0, 8.0}) == doctest::Approx(4.0 * mse({1.0, 2.0}, {3.0, 4.0})));
    CHECK_THROWS_AS(mse({1.0}, {1.0, 2.0}), BadParameter);
}

TEST_CASE("noiseless measurement is the exact projection") {
    const Dictionary dict = gaussian_dictionary(12, 24, 8);
    const Matrix p = Matrix::identity(12);
    const SparseSignal s = gen_sparse_signal(24, 3, 2);
    const Measurement m = measure(p, dict.atoms, s, std::nullopt, 99);
    CHECK(m.noise_norm == 0.0);
    const std::vector<double> x = reconstruct(dict.atoms, s);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(m.x[i] == x[i]);
        CHECK(m.y[i] == x[i]);
    }
}

TEST_CASE("finite SNR is hit exactly") {
    const Dictionary dict = gaussian_dictionary(10, 20, 4);
    const Matrix p = Matrix::identity(10);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const SparseSignal s = gen_sparse_signal(20, 3, seed + 1000);
        const Measurement m = measure(p, dict.atoms, s, 40.0, seed);
        double clean2 = 0.0, noise2 = 0.0;
        for (std::size_t i = 0; i < m.y.size(); ++i) {
            clean2 += m.x[i] * m.x[i];
            const double d = m.y[i] - m.x[i];
            noise2 += d * d;
        }
        const double ratio = noise2 / clean2;
        CHECK(std::abs(ratio - 1e-4) <= 1e-12 * 1e-4);
        CHECK(std::abs(m.noise_norm - std::sqrt(noise2)) <= 1e-12 * m.noise_norm);
    }
}

TEST_CASE("a zero signal measures to zero, and cannot carry finite noise") {
    const Matrix d = Matrix::identity(5);
    SparseSignal zero;
    zero.dim = 5;
    const Measurement m = measure(Matrix::identity(5), d, zero, std::nullopt, 3);
    for (double v : m.y) CHECK(v == 0.0);
    CHECK_THROWS_AS(measure(Matrix::identity(5), d, zero, 40.0, 3), DegenerateSignal);
}

TEST_CASE("matching pursuit solves the trivial axis problem") {
    const Matrix de = Matrix::identity(2);
    const SolveResult r = omp_eps(de, {0.0, 5.0}, 1e-12, 2);
    CHECK(r.gamma.support == std::vector<std::size_t>{1});
    CHECK(r.gamma.coeffs[0] == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(r.iterations == 1);
}

TEST_CASE("matching pursuit picks the best-aligned atom") {
    // third column is exactly the measurement direction
    Matrix de(2, 3);
    const double r = 1.0 / std::sqrt(2.0);
    de(0, 0) = 1.0;
    de(1, 1) = 1.0;
    de(0, 2) = r;
    de(1, 2) = r;
    const SolveResult res = omp_eps(de, {r, r}, 1e-12, 3);
    CHECK(res.gamma.support == std::vector<std::size_t>{2});
    CHECK(res.gamma.coeffs[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("matching pursuit residuals are orthogonal to the chosen atoms") {
    const Dictionary dict = gaussian_dictionary(10, 25, 12);
    const SparseSignal s = gen_sparse_signal(25, 6, 7);
    const std::vector<double> y = matvec(dict.atoms, to_dense(s));
    const SolveResult res = omp_eps(dict.atoms, y, 0.0, 8);
    const std::vector<double> r = residual(dict.atoms, y, res.gamma);
    for (std::size_t idx : res.gamma.support) {
        double dot = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) dot += r[i] * dict.atoms(i, idx);
        CHECK(std::abs(dot) <= 1e-9);
    }
}

TEST_CASE("matching pursuit residual norms shrink with the atom budget") {
    const Dictionary dict = gaussian_dictionary(10, 25, 13);
    const SparseSignal s = gen_sparse_signal(25, 6, 8);
    const std::vector<double> y = matvec(dict.atoms, to_dense(s));
    double prev = norm2(y);
    for (std::size_t budget = 1; budget <= 6; ++budget) {
        const SolveResult res = omp_eps(dict.atoms, y, 0.0, budget);
        const double rn = norm2(residual(dict.atoms, y, res.gamma));
        CHECK(rn <= prev + 1e-12);
        prev = rn;
    }
}

TEST_CASE("matching pursuit refuses an all-zero dictionary") {
    const Matrix de(3, 4);
    CHECK_THROWS_AS(omp_eps(de, {1.0, 0.0, 0.0}, 1e-10, 2), ZeroColumn);
}

TEST_CASE("duplicate atoms resolve to the lowest index") {
    Matrix de(4, 6);
    de(0, 0) = 1.0;
    de(1, 1) = 1.0;
    de(2, 2) = 1.0;
    de(0, 3) = 1.0;  // exact copy of column 0
    de(3, 4) = 1.0;
    de(1, 5) = 0.6;
    de(2, 5) = 0.8;
    const SolveResult res = omp_eps(de, {2.0, 0.0, 0.0, 0.0}, 1e-12, 2);
    CHECK(res.gamma.support == std::vector<std::size_t>{0});
    CHECK(res.gamma.coeffs[0] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("smoothed-l0 on a zero measurement returns the empty signal") {
    const Dictionary dict = gaussian_dictionary(6, 12, 2);
    const SolveResult res = sl0(dict.atoms, std::vector<double>(6, 0.0));
    CHECK(res.gamma.support.empty());
}

TEST_CASE("smoothed-l0 through the identity reproduces the measurement") {
    const SparseSignal s = gen_sparse_signal(12, 3, 4);
    const std::vector<double> y = to_dense(s);
    const SolveResult res = sl0(Matrix::identity(12), y);
    const std::vector<double> yhat = to_dense(res.gamma);
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(std::abs(yhat[i] - y[i]) <= 1e-8);
}

TEST_CASE("smoothed-l0 recovers very sparse signals reliably") {
    const Dictionary dict = gaussian_dictionary(16, 32, 5);
    int hits = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        const SparseSignal s = gen_sparse_signal(32, 2, 5000 + t);
        const std::vector<double> y = matvec(dict.atoms, to_dense(s));
        const SolveResult res = sl0(dict.atoms, y);
        const double err = mse(to_dense(res.gamma), to_dense(s));
        if (err < 1e-8) ++hits;
    }
    CHECK(hits >= 190);
}

TEST_CASE("smoothed-l0 needs full row rank") {
    Matrix de(3, 5);
    for (std::size_t j = 0; j < 5; ++j) {
        de(0, j) = 1.0 + static_cast<double>(j);
        de(1, j) = 2.0 * de(0, j);  // row 1 is a multiple of row 0
        de(2, j) = 0.5;
    }
    CHECK_THROWS_AS(sl0(de, {1.0, 2.0, 0.5}), RankDeficient);
}

TEST_CASE("hard thresholding solves the identity problem in one pass") {
    const SparseSignal s = gen_sparse_signal(16, 3, 21);
    const std::vector<double> y = to_dense(s);
    const SolveResult res = iht(Matrix::identity(16), y, 3);
    const std::vector<double> got = to_dense(res.gamma);
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(std::abs(got[i] - y[i]) <= 1e-8);
}

TEST_CASE("hard thresholding never ends worse than the zero guess") {
    const Dictionary dict = gaussian_dictionary(8, 16, 30);
    const SparseSignal s = gen_sparse_signal(16, 3, 31);
    const std::vector<double> y = matvec(dict.atoms, to_dense(s));
    for (std::size_t k : {std::size_t{2}, std::size_t{4}, std::size_t{16}}) {
        const SolveResult res = iht(dict.atoms, y, k);
        CHECK(norm2(residual(dict.atoms, y, res.gamma)) <= norm2(y) + 1e-12);
    }
}

TEST_CASE("hard thresholding respects its sparsity budget") {
    const Dictionary dict = gaussian_dictionary(8, 16, 33);
    const SparseSignal s = gen_sparse_signal(16, 5, 34);
    const std::vector<double> y = matvec(dict.atoms, to_dense(s));
    const SolveResult res = iht(dict.atoms, y, 3);
    CHECK(res.gamma.support.size() <= 3);
    const SolveResult empty = iht(dict.atoms, y, 0);
    CHECK(empty.gamma.support.empty());
    CHECK_THROWS_AS(iht(dict.atoms, y, 17), BadParameter);
}

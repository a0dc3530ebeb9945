#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "csopt/matrix.hpp"

namespace csopt {

// k-sparse coefficient vector: strictly increasing support indices with the
// matching nonzero coefficients.
struct SparseSignal {
    std::size_t dim = 0;
    std::vector<std::size_t> support;
    std::vector<double> coeffs;
};

// Uniform random support of size k, Gaussian coefficients; magnitudes below
// 1e-3 are redrawn so "success" never hinges on a coefficient that is
// numerically invisible.
SparseSignal gen_sparse_signal(std::size_t N, std::size_t k, std::uint64_t seed);

std::vector<double> to_dense(const SparseSignal& s);

// x = D * gamma as a dense signal-domain vector.
std::vector<double> reconstruct(const Matrix& d, const SparseSignal& gamma);

// Mean squared entry difference.
double mse(const std::vector<double>& a, const std::vector<double>& b);

struct Measurement {
    std::vector<double> x;  // clean signal D * gamma
    std::vector<double> y;  // P * x, plus noise when snr_db is finite
    double noise_norm = 0.0;
};

// Noise is rescaled so that ||noise||^2 / ||P x||^2 equals 10^(-snr/10)
// exactly; snr_db = nullopt means noiseless. Throws DegenerateSignal when a
// finite SNR is requested for a zero clean measurement.
Measurement measure(const Matrix& p, const Matrix& d, const SparseSignal& gamma,
                    std::optional<double> snr_db, std::uint64_t seed);

struct SolveResult {
    SparseSignal gamma;
    std::size_t iterations = 0;
};

// Orthogonal matching pursuit: greedy selection by normalized correlation
// (ties to the lowest index), least-squares refit on the support, stop when
// the residual norm is <= eps or max_atoms are selected. Columns of
// numerically zero norm are never selectable; if no column is selectable at
// all, throws ZeroColumn.
SolveResult omp_eps(const Matrix& de, const std::vector<double>& y, double eps,
                    std::size_t max_atoms);

struct Sl0Params {
    double eps = 0.0;               // allowed equality residual (0 = exact projection)
    double sigma_factor = 0.7;      // ladder decay
    double sigma_floor_ratio = 1e-4;
    int steps_per_sigma = 3;
    double step = 2.0;
    double zero_tol_ratio = 1e-6;   // final thresholding, relative to max |gamma|
};

// Smoothed-L0: minimum-norm start, graduated Gaussian smoothing with a few
// projected gradient steps per sigma. Requires full row rank (throws
// RankDeficient otherwise).
SolveResult sl0(const Matrix& de, const std::vector<double>& y, const Sl0Params& params = {});

struct IhtParams {
    std::size_t max_iters = 300;
    double residual_tol = 1e-10;  // stop when the residual norm changes less
};

// Iterative hard thresholding with the adaptive (normalized) step and step
// halving until the thresholded move does not increase the residual. Keeps
// the k largest magnitudes, ties to the lowest index.
SolveResult iht(const Matrix& de, const std::vector<double>& y, std::size_t k,
                const IhtParams& params = {});

}  // namespace csopt

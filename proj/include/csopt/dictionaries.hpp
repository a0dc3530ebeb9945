#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "csopt/matrix.hpp"

namespace csopt {

// An overcomplete dictionary: n x N atom matrix with unit-norm columns,
// plus the generator it came from.
struct Dictionary {
    Matrix atoms;
    std::string kind;

    std::size_t n() const { return atoms.rows(); }
    std::size_t N() const { return atoms.cols(); }
};

// i.i.d. standard normal entries, columns normalized.
Dictionary gaussian_dictionary(std::size_t n, std::size_t N, std::uint64_t seed);

// Random orthogonal basis (QR of a Gaussian matrix, R diagonal made
// positive) with column i scaled by a uniform draw from [1-eps, 1+eps].
// Columns are exactly orthogonal but deliberately not unit norm.
Dictionary perturbed_orthogonal_dictionary(std::size_t n, double eps, std::uint64_t seed);

// [I | H] where H is the full-level orthonormal Haar basis; n a power of two.
Dictionary dirac_haar_dictionary(std::size_t n);

// Stationary (undecimated, circular) Symmlet-4 system: all n circular
// shifts of the wavelet at each level plus the coarsest scaling waveform,
// N = (levels + 1) * n, columns normalized.
Dictionary undecimated_wavelet_dictionary(std::size_t n, std::size_t levels);

// Atoms are nonnegative combinations of `latent` shared random directions
// plus 30% relative Gaussian noise, normalized; clusters atoms around a
// low-dimensional cone so the Gram is heavy-tailed.
Dictionary correlated_synthetic_dictionary(std::size_t n, std::size_t N, std::size_t latent,
                                           std::uint64_t seed);

struct Histogram {
    std::vector<double> edges;      // bins + 1 ascending edges over [0, 1]
    std::vector<double> fractions;  // sums to 1
};

// Histogram of off-diagonal |Gram| magnitudes of the column-normalized
// dictionary, over equal-width bins spanning [0, 1].
Histogram gram_histogram(const Dictionary& d, std::size_t bins);

}  // namespace csopt

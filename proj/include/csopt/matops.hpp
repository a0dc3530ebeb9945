#pragma once

#include <cstddef>
#include <vector>

#include "csopt/matrix.hpp"

namespace csopt {

// Symmetric square matrix. Construction is either `trusted` (caller
// guarantees exact symmetry, used by operations that mirror a triangle) or
// `checked` (validates symmetry within an absolute tolerance and finiteness).
class GramMatrix {
public:
    GramMatrix() = default;

    static GramMatrix trusted(Matrix m);
    static GramMatrix checked(Matrix m, double tol = 1e-12);

    std::size_t dim() const { return mat_.rows(); }
    double operator()(std::size_t i, std::size_t j) const { return mat_(i, j); }
    double& operator()(std::size_t i, std::size_t j) { return mat_(i, j); }

    const Matrix& mat() const { return mat_; }
    Matrix& mat() { return mat_; }

private:
    explicit GramMatrix(Matrix m) : mat_(std::move(m)) {}
    Matrix mat_;
};

// Eigenvalues sorted in descending order; eigenvectors stored as the
// matching columns. Eigenvector signs are not pinned down; callers must not
// depend on them.
struct EigenDecomposition {
    std::vector<double> eigenvalues;
    Matrix eigenvectors;
};

// Gram matrix of the columns of d, exactly as given (no normalization).
GramMatrix gram(const Matrix& d);

// Unit-norm columns; throws ZeroColumn on a numerically zero column.
Matrix normalize_columns(const Matrix& d);

// Full symmetric eigendecomposition. Throws NoConvergence if the iterative
// solver gives up.
EigenDecomposition eig_sym(const GramMatrix& s);

// Moore-Penrose pseudoinverse via SVD; singular values below
// 1e-12 * sigma_max are treated as zero. Zero input gives a zero matrix of
// the transposed shape.
Matrix pinv(const Matrix& a);

// Nearest (Frobenius) PSD matrix of rank <= m: keep the m largest
// eigenvalues, clamp negatives among them to zero, discard the rest.
GramMatrix rank_m_psd_approx(const GramMatrix& s, std::size_t m);

// Factor F (m x N) with F^T F = S for S that is PSD and of rank <= m, both
// within an absolute tolerance of 1e-8 on the spectrum. Throws NotPsd /
// NotLowRank when the input is outside that domain.
Matrix psd_sqrt_factor(const GramMatrix& s, std::size_t m);

// Frobenius-nearest matrix with unit diagonal and min eigenvalue >= -1e-8,
// by Dykstra-corrected alternating projections between the PSD cone and the
// unit-diagonal affine set. When target_shift is given the effective target
// is s + target_shift. Converged when successive iterates differ by < tol in
// Frobenius norm (and the diagonal residual is at tolerance); throws
// NcmNoConvergence with the last iterate after max_sweeps.
GramMatrix nearest_correlation_matrix(const GramMatrix& s,
                                      const Matrix* target_shift = nullptr,
                                      double tol = 1e-7,
                                      std::size_t max_sweeps = 1000);

}  // namespace csopt

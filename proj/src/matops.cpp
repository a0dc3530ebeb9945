#include "csopt/matops.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "csopt/errors.hpp"
#include "csopt/kernels.hpp"

namespace csopt {

namespace {

Eigen::MatrixXd to_eigen(const Matrix& a) {
    Eigen::MatrixXd e(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(i, j);
    return e;
}

Matrix from_eigen(const Eigen::MatrixXd& e) {
    Matrix a(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
    for (Eigen::Index i = 0; i < e.rows(); ++i)
        for (Eigen::Index j = 0; j < e.cols(); ++j) a(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = e(i, j);
    return a;
}

double frobenius_diff(const Matrix& a, const Matrix& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a.storage()[i] - b.storage()[i];
        s += d * d;
    }
    return std::sqrt(s);
}

// Projection onto the PSD cone: clamp negative eigenvalues. Reconstruction
// goes through a scaled factor and the gram kernel so the result is exactly
// symmetric.
Matrix project_psd(const GramMatrix& s) {
    const EigenDecomposition ed = eig_sym(s);
    const std::size_t n = s.dim();
    Matrix f(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = std::sqrt(std::max(ed.eigenvalues[i], 0.0));
        for (std::size_t j = 0; j < n; ++j) f(i, j) = w * ed.eigenvectors(j, i);
    }
    return kernels::gram_of_columns(f);
}

}  // namespace

GramMatrix GramMatrix::trusted(Matrix m) {
    if (m.rows() != m.cols()) throw BadParameter("GramMatrix: not square");
    return GramMatrix(std::move(m));
}

GramMatrix GramMatrix::checked(Matrix m, double tol) {
    if (m.rows() != m.cols()) throw BadParameter("GramMatrix: not square");
    if (!m.all_finite()) throw BadParameter("GramMatrix: non-finite entry");
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j)
            if (std::abs(m(i, j) - m(j, i)) > tol)
                throw BadParameter("GramMatrix: asymmetry beyond tolerance at (" +
                                   std::to_string(i) + "," + std::to_string(j) + ")");
    return GramMatrix(std::move(m));
}

GramMatrix gram(const Matrix& d) {
    return GramMatrix::trusted(kernels::gram_of_columns(d));
}

Matrix normalize_columns(const Matrix& d) {
    // 1e-12 is the degenerate-column boundary for the public operation; the
    // kernel default is looser for internal constructors.
    return kernels::normalize_columns(d, 1e-12);
}

EigenDecomposition eig_sym(const GramMatrix& s) {
    const Eigen::MatrixXd a = to_eigen(s.mat());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
    if (solver.info() != Eigen::Success)
        throw NoConvergence("eig_sym: eigensolver exceeded its iteration cap");
    const std::size_t n = s.dim();
    EigenDecomposition ed;
    ed.eigenvalues.resize(n);
    ed.eigenvectors = Matrix(n, n);
    // Eigen sorts ascending; flip to descending. Equal eigenvalues keep a
    // deterministic order because the flip is a fixed permutation.
    for (std::size_t i = 0; i < n; ++i) {
        const Eigen::Index src = static_cast<Eigen::Index>(n - 1 - i);
        ed.eigenvalues[i] = solver.eigenvalues()(src);
        for (std::size_t r = 0; r < n; ++r)
            ed.eigenvectors(r, i) = solver.eigenvectors()(static_cast<Eigen::Index>(r), src);
    }
    return ed;
}

Matrix pinv(const Matrix& a) {
    const Eigen::MatrixXd e = to_eigen(a);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(e, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double cutoff = sv.size() ? 1e-12 * sv(0) : 0.0;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff && sv(i) > 0.0) inv(i) = 1.0 / sv(i);
    const Eigen::MatrixXd p = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
    return from_eigen(p);
}

GramMatrix rank_m_psd_approx(const GramMatrix& s, std::size_t m) {
    const std::size_t n = s.dim();
    if (m == 0 || m > n) throw BadParameter("rank_m_psd_approx: m out of range");
    const EigenDecomposition ed = eig_sym(s);
    Matrix f(m, n);
    for (std::size_t i = 0; i < m; ++i) {
        const double w = std::sqrt(std::max(ed.eigenvalues[i], 0.0));
        for (std::size_t j = 0; j < n; ++j) f(i, j) = w * ed.eigenvectors(j, i);
    }
    return GramMatrix::trusted(kernels::gram_of_columns(f));
}

Matrix psd_sqrt_factor(const GramMatrix& s, std::size_t m) {
    const std::size_t n = s.dim();
    if (m == 0 || m > n) throw BadParameter("psd_sqrt_factor: m out of range");
    const EigenDecomposition ed = eig_sym(s);
    const double spectrum_tol = 1e-8;
    if (ed.eigenvalues[n - 1] < -spectrum_tol)
        throw NotPsd("psd_sqrt_factor: min eigenvalue " +
                     format_real(ed.eigenvalues[n - 1]) + " below -1e-8");
    double trailing = 0.0;
    for (std::size_t i = m; i < n; ++i) trailing += std::abs(ed.eigenvalues[i]);
    if (trailing > spectrum_tol)
        throw NotLowRank("psd_sqrt_factor: trailing eigenvalue mass " +
                         format_real(trailing) + " exceeds 1e-8 for m=" + std::to_string(m));
    Matrix f(m, n);
    for (std::size_t i = 0; i < m; ++i) {
        const double w = std::sqrt(std::max(ed.eigenvalues[i], 0.0));
        for (std::size_t j = 0; j < n; ++j) f(i, j) = w * ed.eigenvectors(j, i);
    }
    return f;
}

GramMatrix nearest_correlation_matrix(const GramMatrix& s, const Matrix* target_shift,
                                      double tol, std::size_t max_sweeps) {
    const std::size_t n = s.dim();
    Matrix target = s.mat();
    if (target_shift) {
        if (target_shift->rows() != n || target_shift->cols() != n)
            throw BadParameter("nearest_correlation_matrix: shift shape mismatch");
        for (std::size_t i = 0; i < target.size(); ++i)
            target.storage()[i] += target_shift->storage()[i];
    }

    const double diag_tol = 1e-8;
    Matrix y = target;          // diagonal-corrected sequence
    Matrix dykstra(n, n);       // correction for the PSD (non-affine) projection
    Matrix x = target;
    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        Matrix r = y;
        for (std::size_t i = 0; i < r.size(); ++i) r.storage()[i] -= dykstra.storage()[i];
        x = project_psd(GramMatrix::trusted(r));
        for (std::size_t i = 0; i < r.size(); ++i)
            dykstra.storage()[i] = x.storage()[i] - r.storage()[i];
        Matrix y_next = x;
        for (std::size_t i = 0; i < n; ++i) y_next(i, i) = 1.0;
        const double change = frobenius_diff(y_next, y);
        y = y_next;
        double diag_res = 0.0;
        for (std::size_t i = 0; i < n; ++i) diag_res = std::max(diag_res, std::abs(x(i, i) - 1.0));
        if (change < tol && diag_res <= diag_tol)
            return GramMatrix::trusted(x);
    }
    throw NcmNoConvergence("nearest_correlation_matrix: no convergence in " +
                           std::to_string(max_sweeps) + " sweeps", x.storage(), n);
}

}  // namespace csopt

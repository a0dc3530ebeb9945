#include "csopt/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "csopt/errors.hpp"
#include "csopt/matops.hpp"
#include "csopt/rng.hpp"

namespace csopt {

namespace {

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

std::vector<double> matvec(const Matrix& a, const std::vector<double>& v) {
    if (v.size() != a.cols()) throw BadParameter("matvec: size mismatch");
    std::vector<double> out(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * v[j];
        out[i] = acc;
    }
    return out;
}

Eigen::MatrixXd to_eigen(const Matrix& a) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols()));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(i, j);
    return out;
}

}  // namespace

SparseSignal gen_sparse_signal(std::size_t N, std::size_t k, std::uint64_t seed) {
    if (N == 0) throw BadParameter("gen_sparse_signal: empty dimension");
    if (k > N) throw BadParameter("gen_sparse_signal: sparsity exceeds dimension");
    Rng rng(seed);

    // Partial Fisher-Yates over an index pool gives a uniform k-subset.
    std::vector<std::size_t> pool(N);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + rng.uniform_index(N - i);
        std::swap(pool[i], pool[j]);
    }
    SparseSignal s;
    s.dim = N;
    s.support.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(s.support.begin(), s.support.end());

    s.coeffs.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        double c = rng.normal();
        while (std::fabs(c) < 1e-3) c = rng.normal();
        s.coeffs[i] = c;
    }
    return s;
}

std::vector<double> to_dense(const SparseSignal& s) {
    std::vector<double> out(s.dim, 0.0);
    for (std::size_t i = 0; i < s.support.size(); ++i) out[s.support[i]] = s.coeffs[i];
    return out;
}

std::vector<double> reconstruct(const Matrix& d, const SparseSignal& gamma) {
    if (gamma.dim != d.cols()) throw BadParameter("reconstruct: dimension mismatch");
    std::vector<double> x(d.rows(), 0.0);
    for (std::size_t t = 0; t < gamma.support.size(); ++t) {
        const std::size_t j = gamma.support[t];
        const double c = gamma.coeffs[t];
        for (std::size_t i = 0; i < d.rows(); ++i) x[i] += c * d(i, j);
    }
    return x;
}

double mse(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.empty()) throw BadParameter("mse: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s / static_cast<double>(a.size());
}

Measurement measure(const Matrix& p, const Matrix& d, const SparseSignal& gamma,
                    std::optional<double> snr_db, std::uint64_t seed) {
    if (p.cols() != d.rows()) throw BadParameter("measure: projection/dictionary mismatch");
    Measurement m;
    m.x = reconstruct(d, gamma);
    m.y = matvec(p, m.x);
    if (!snr_db) return m;

    const double clean_norm = norm2(m.y);
    if (clean_norm == 0.0) throw DegenerateSignal("measure: zero measurement with finite SNR");

    Rng rng(seed);
    std::vector<double> noise(m.y.size());
    for (double& e : noise) e = rng.normal();
    const double noise_raw = norm2(noise);
    if (noise_raw == 0.0) throw DegenerateSignal("measure: degenerate noise draw");

    // Scale so the realized SNR matches the request exactly.
    const double target = clean_norm * std::pow(10.0, -(*snr_db) / 20.0);
    const double scale = target / noise_raw;
    for (std::size_t i = 0; i < m.y.size(); ++i) m.y[i] += scale * noise[i];
    m.noise_norm = target;
    return m;
}

SolveResult omp_eps(const Matrix& de, const std::vector<double>& y, double eps,
                    std::size_t max_atoms) {
    const std::size_t mrows = de.rows();
    const std::size_t N = de.cols();
    if (y.size() != mrows) throw BadParameter("omp_eps: measurement size mismatch");
    if (eps < 0.0) throw BadParameter("omp_eps: negative tolerance");
    max_atoms = std::min(max_atoms, std::min(mrows, N));

    // Columns below this norm can never be selected; the correlation ratio
    // would be meaningless noise.
    constexpr double kSelectableNorm = 1e-12;
    std::vector<double> col_norm(N);
    bool any_selectable = false;
    for (std::size_t j = 0; j < N; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < mrows; ++i) s += de(i, j) * de(i, j);
        col_norm[j] = std::sqrt(s);
        any_selectable = any_selectable || col_norm[j] > kSelectableNorm;
    }
    if (!any_selectable) throw ZeroColumn("omp_eps: no selectable column", 0);

    Eigen::MatrixXd de_e = to_eigen(de);
    Eigen::VectorXd y_e(static_cast<Eigen::Index>(mrows));
    for (std::size_t i = 0; i < mrows; ++i) y_e(static_cast<Eigen::Index>(i)) = y[i];

    std::vector<double> res(y);
    std::vector<std::size_t> support;
    std::vector<char> used(N, 0);
    Eigen::VectorXd coef;

    std::size_t iters = 0;
    while (norm2(res) > eps && support.size() < max_atoms) {
        // argmax_j |<res, d_j>| / ||d_j|| over unused selectable columns.
        double best = -1.0;
        std::size_t best_j = N;
        for (std::size_t j = 0; j < N; ++j) {
            if (used[j] || col_norm[j] <= kSelectableNorm) continue;
            double dot = 0.0;
            for (std::size_t i = 0; i < mrows; ++i) dot += res[i] * de(i, j);
            const double score = std::fabs(dot) / col_norm[j];
            if (score > best) {
                best = score;
                best_j = j;
            }
        }
        if (best_j == N) break;  // nothing selectable remains
        used[best_j] = 1;
        support.push_back(best_j);
        ++iters;

        // Least-squares refit on the current support.
        Eigen::MatrixXd sub(static_cast<Eigen::Index>(mrows),
                            static_cast<Eigen::Index>(support.size()));
        for (std::size_t t = 0; t < support.size(); ++t)
            sub.col(static_cast<Eigen::Index>(t)) = de_e.col(static_cast<Eigen::Index>(support[t]));
        coef = sub.colPivHouseholderQr().solve(y_e);
        Eigen::VectorXd r = y_e - sub * coef;
        for (std::size_t i = 0; i < mrows; ++i) res[i] = r(static_cast<Eigen::Index>(i));
    }

    SparseSignal g;
    g.dim = N;
    std::vector<std::size_t> order(support.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return support[a] < support[b]; });
    for (std::size_t t : order) {
        g.support.push_back(support[t]);
        g.coeffs.push_back(coef.size() > 0 ? coef(static_cast<Eigen::Index>(t)) : 0.0);
    }
    return {std::move(g), iters};
}

SolveResult sl0(const Matrix& de, const std::vector<double>& y, const Sl0Params& params) {
    const std::size_t mrows = de.rows();
    const std::size_t N = de.cols();
    if (y.size() != mrows) throw BadParameter("sl0: measurement size mismatch");
    if (params.eps < 0.0) throw BadParameter("sl0: negative tolerance");

    Eigen::MatrixXd de_e = to_eigen(de);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(de_e, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cutoff = (sv.size() > 0 ? sv(0) : 0.0) * 1e-12;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff && sv(i) > 0.0) ++rank;
    if (static_cast<std::size_t>(rank) < mrows)
        throw RankDeficient("sl0: effective dictionary is row rank deficient");

    Eigen::VectorXd inv_sv(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) inv_sv(i) = 1.0 / sv(i);
    // pinv(De) v = V diag(1/s) U^T v, applied rather than materialized.
    const auto apply_pinv = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
        return svd.matrixV() * (inv_sv.asDiagonal() * (svd.matrixU().transpose() * v));
    };

    Eigen::VectorXd y_e(static_cast<Eigen::Index>(mrows));
    for (std::size_t i = 0; i < mrows; ++i) y_e(static_cast<Eigen::Index>(i)) = y[i];

    Eigen::VectorXd gamma = apply_pinv(y_e);
    const double g0_max = gamma.size() > 0 ? gamma.cwiseAbs().maxCoeff() : 0.0;

    SparseSignal out;
    out.dim = N;
    if (g0_max == 0.0) return {std::move(out), 0};

    const double sigma0 = 2.0 * g0_max;
    const double sigma_floor = params.sigma_floor_ratio * sigma0;
    std::size_t iters = 0;
    double sigma = sigma0;
    while (sigma >= sigma_floor) {
        for (int s = 0; s < params.steps_per_sigma; ++s) {
            // Gradient ascent on the smoothed sparsity measure...
            for (Eigen::Index i = 0; i < gamma.size(); ++i) {
                const double g = gamma(i);
                gamma(i) = g - params.step * g * std::exp(-g * g / (2.0 * sigma * sigma));
            }
            // ...followed by projection back toward the data constraint.
            Eigen::VectorXd r = de_e * gamma - y_e;
            const double rn = r.norm();
            if (rn > params.eps) {
                const double keep = params.eps > 0.0 ? (1.0 - params.eps / rn) : 1.0;
                gamma -= apply_pinv(r) * keep;
            }
            ++iters;
        }
        sigma *= params.sigma_factor;
    }

    const double gmax = gamma.cwiseAbs().maxCoeff();
    const double thresh = params.zero_tol_ratio * gmax;
    for (std::size_t j = 0; j < N; ++j) {
        const double v = gamma(static_cast<Eigen::Index>(j));
        if (std::fabs(v) > thresh) {
            out.support.push_back(j);
            out.coeffs.push_back(v);
        }
    }
    return {std::move(out), iters};
}

SolveResult iht(const Matrix& de, const std::vector<double>& y, std::size_t k,
                const IhtParams& params) {
    const std::size_t mrows = de.rows();
    const std::size_t N = de.cols();
    if (y.size() != mrows) throw BadParameter("iht: measurement size mismatch");
    if (k > N) throw BadParameter("iht: sparsity level above the dictionary size");
    if (k == 0) {
        SolveResult empty;
        empty.gamma.dim = N;
        empty.iterations = 0;
        return empty;
    }

    Eigen::MatrixXd de_e = to_eigen(de);
    Eigen::VectorXd y_e(static_cast<Eigen::Index>(mrows));
    for (std::size_t i = 0; i < mrows; ++i) y_e(static_cast<Eigen::Index>(i)) = y[i];

    // Keep the k largest magnitudes, ties resolved toward the lowest index.
    const auto hard_threshold = [&](Eigen::VectorXd& v) {
        std::vector<std::size_t> idx(N);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return std::fabs(v(static_cast<Eigen::Index>(a))) >
                   std::fabs(v(static_cast<Eigen::Index>(b)));
        });
        std::vector<char> keep(N, 0);
        for (std::size_t t = 0; t < k; ++t) keep[idx[t]] = 1;
        for (std::size_t j = 0; j < N; ++j)
            if (!keep[j]) v(static_cast<Eigen::Index>(j)) = 0.0;
    };

    Eigen::VectorXd gamma = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(N));
    double res_norm = y_e.norm();
    std::size_t it = 0;
    for (; it < params.max_iters; ++it) {
        Eigen::VectorXd r = y_e - de_e * gamma;
        Eigen::VectorXd g = de_e.transpose() * r;

        // Step length from the gradient restricted to the active set: the
        // current support, or the top-k gradient entries on the first pass.
        Eigen::VectorXd g_s = g;
        if (gamma.isZero(0.0)) {
            hard_threshold(g_s);
        } else {
            for (Eigen::Index j = 0; j < g_s.size(); ++j)
                if (gamma(j) == 0.0) g_s(j) = 0.0;
        }
        const double num = g_s.squaredNorm();
        const Eigen::VectorXd dg = de_e * g_s;
        const double den = dg.squaredNorm();
        double mu = (den > 0.0 && num > 0.0) ? num / den : 1.0;

        double new_res = res_norm;
        Eigen::VectorXd cand;
        for (int halvings = 0; halvings < 60; ++halvings) {
            cand = gamma + mu * g;
            hard_threshold(cand);
            new_res = (y_e - de_e * cand).norm();
            if (new_res <= res_norm) break;
            mu *= 0.5;
        }
        gamma = cand;
        const double change = std::fabs(res_norm - new_res);
        res_norm = new_res;
        if (change < params.residual_tol) {
            ++it;
            break;
        }
    }

    SparseSignal out;
    out.dim = N;
    for (std::size_t j = 0; j < N; ++j) {
        const double v = gamma(static_cast<Eigen::Index>(j));
        if (v != 0.0) {
            out.support.push_back(j);
            out.coeffs.push_back(v);
        }
    }
    return {std::move(out), it};
}

}  // namespace csopt

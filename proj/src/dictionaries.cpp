#include "csopt/dictionaries.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "csopt/errors.hpp"
#include "csopt/kernels.hpp"
#include "csopt/matops.hpp"
#include "csopt/rng.hpp"

namespace csopt {

namespace {

bool is_power_of_two(std::size_t n) { return n >= 1 && (n & (n - 1)) == 0; }

// Symmlet-4 synthesis low-pass filter. Sums to sqrt(2), unit energy,
// orthogonal to its even shifts; all three identities are re-checked at
// construction time so a typo here cannot survive.
constexpr double kSym4[8] = {
    0.032223100604042702,  -0.012603967262037833, -0.099219543576847216,
    0.29785779560527736,   0.80373875180591614,   0.49761866763201545,
    -0.029635527645998851, -0.075765714789273325,
};

void check_qmf(const double* h, std::size_t taps) {
    double sum = 0.0, energy = 0.0;
    for (std::size_t k = 0; k < taps; ++k) {
        sum += h[k];
        energy += h[k] * h[k];
    }
    if (std::abs(sum - std::sqrt(2.0)) > 1e-12 || std::abs(energy - 1.0) > 1e-12)
        throw Error("wavelet filter fails sum/energy identities");
    for (std::size_t shift = 2; shift < taps; shift += 2) {
        double dot = 0.0;
        for (std::size_t k = 0; k + shift < taps; ++k) dot += h[k] * h[k + shift];
        if (std::abs(dot) > 1e-12) throw Error("wavelet filter fails shift orthogonality");
    }
}

std::vector<double> embed(const double* f, std::size_t taps, std::size_t n) {
    std::vector<double> v(n, 0.0);
    for (std::size_t k = 0; k < taps; ++k) v[k] = f[k];
    return v;
}

std::vector<double> upsample_embed(const double* f, std::size_t taps, std::size_t stride,
                                   std::size_t n) {
    std::vector<double> v(n, 0.0);
    for (std::size_t k = 0; k < taps; ++k) v[(k * stride) % n] = f[k];
    return v;
}

std::vector<double> conv_circular(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    std::vector<double> c(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += a[k] * b[(i + n - k) % n];
        c[i] = s;
    }
    return c;
}

Matrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
    Matrix a(rows, cols);
    for (std::size_t i = 0; i < a.size(); ++i) a.storage()[i] = rng.normal();
    return a;
}

}  // namespace

Dictionary gaussian_dictionary(std::size_t n, std::size_t N, std::uint64_t seed) {
    if (n < 1 || N < 1) throw BadParameter("gaussian_dictionary: empty shape");
    if (n > N) throw BadParameter("gaussian_dictionary: need n <= N");
    Rng rng(seed);
    Matrix a = gaussian_matrix(n, N, rng);
    return {kernels::normalize_columns(a), "gaussian"};
}

Dictionary perturbed_orthogonal_dictionary(std::size_t n, double eps, std::uint64_t seed) {
    if (n < 2) throw BadParameter("perturbed_orthogonal_dictionary: need n >= 2");
    if (!(eps > 0.0) || eps >= 1.0)
        throw BadParameter("perturbed_orthogonal_dictionary: eps must be in (0,1)");
    Rng rng(seed);
    const Matrix a = gaussian_matrix(n, n, rng);
    Eigen::MatrixXd e(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(i, j);
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(e);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < q.cols(); ++j)
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    Matrix d(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const double scale = rng.uniform(1.0 - eps, 1.0 + eps);
        for (std::size_t i = 0; i < n; ++i)
            d(i, j) = q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * scale;
    }
    return {std::move(d), "perturbed-orth"};
}

Dictionary dirac_haar_dictionary(std::size_t n) {
    if (!is_power_of_two(n) || n < 2)
        throw BadParameter("dirac_haar_dictionary: n must be a power of two >= 2");
    std::size_t levels = 0;
    for (std::size_t v = n; v > 1; v >>= 1) ++levels;
    Matrix d(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) d(i, i) = 1.0;
    // Haar basis: global scaling vector, then details from coarsest to
    // finest, each level's wavelets ordered by position.
    std::size_t col = n;
    const double scale_val = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) d(i, col) = scale_val;
    ++col;
    for (std::size_t lev = levels; lev >= 1; --lev) {
        const std::size_t support = static_cast<std::size_t>(1) << lev;
        const double amp = 1.0 / std::sqrt(static_cast<double>(support));
        for (std::size_t k = 0; k < n / support; ++k) {
            const std::size_t base = k * support;
            for (std::size_t i = 0; i < support / 2; ++i) {
                d(base + i, col) = amp;
                d(base + support / 2 + i, col) = -amp;
            }
            ++col;
        }
    }
    return {std::move(d), "dirac-haar"};
}

Dictionary undecimated_wavelet_dictionary(std::size_t n, std::size_t levels) {
    if (levels < 1) throw BadParameter("undecimated_wavelet_dictionary: levels must be >= 1");
    const std::size_t taps = 8;
    const std::size_t equiv_support = (taps - 1) * ((static_cast<std::size_t>(1) << levels) - 1) + 1;
    if (equiv_support > n)
        throw BadParameter("undecimated_wavelet_dictionary: filter support exceeds n");
    check_qmf(kSym4, taps);
    double g[taps];
    for (std::size_t k = 0; k < taps; ++k)
        g[k] = (k % 2 == 0 ? 1.0 : -1.0) * kSym4[taps - 1 - k];

    // Equivalent a-trous waveforms: scaling chain plus one wavelet per level.
    std::vector<std::vector<double>> wavelets;
    std::vector<double> scaling = embed(kSym4, taps, n);
    wavelets.push_back(embed(g, taps, n));
    for (std::size_t lev = 2; lev <= levels; ++lev) {
        const std::size_t stride = static_cast<std::size_t>(1) << (lev - 1);
        wavelets.push_back(conv_circular(scaling, upsample_embed(g, taps, stride, n)));
        scaling = conv_circular(scaling, upsample_embed(kSym4, taps, stride, n));
    }

    Matrix d(n, (levels + 1) * n);
    std::size_t col = 0;
    auto place_shifts = [&](const std::vector<double>& w) {
        for (std::size_t shift = 0; shift < n; ++shift) {
            for (std::size_t i = 0; i < n; ++i) d((i + shift) % n, col) = w[i];
            ++col;
        }
    };
    for (const auto& w : wavelets) place_shifts(w);
    place_shifts(scaling);
    return {kernels::normalize_columns(d), "swt-sym4"};
}

Dictionary correlated_synthetic_dictionary(std::size_t n, std::size_t N, std::size_t latent,
                                           std::uint64_t seed) {
    if (n < 1 || N < 1) throw BadParameter("correlated_synthetic_dictionary: empty shape");
    if (latent < 1 || latent > n)
        throw BadParameter("correlated_synthetic_dictionary: latent must be in [1, n]");
    Rng rng(seed);
    std::vector<std::vector<double>> dirs(latent, std::vector<double>(n));
    for (auto& u : dirs) {
        double norm2 = 0.0;
        for (double& v : u) {
            v = rng.normal();
            norm2 += v * v;
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (double& v : u) v *= inv;
    }
    Matrix d(n, N);
    std::vector<double> noise(n);
    for (std::size_t j = 0; j < N; ++j) {
        // Dominant generator per atom, light bleed into the others: atoms
        // cluster around the latent directions instead of collapsing onto
        // their common mean.
        std::vector<double> w(latent);
        for (double& v : w) v = 0.3 * rng.uniform();
        w[j % latent] = 1.0;
        double norm2 = 0.0;
        for (double& v : noise) {
            v = rng.normal();
            norm2 += v * v;
        }
        const double noise_scale = 0.3 / std::sqrt(norm2);
        for (std::size_t i = 0; i < n; ++i) {
            double v = noise[i] * noise_scale;
            for (std::size_t t = 0; t < latent; ++t) v += w[t] * dirs[t][i];
            d(i, j) = v;
        }
    }
    return {kernels::normalize_columns(d), "correlated"};
}

Histogram gram_histogram(const Dictionary& d, std::size_t bins) {
    if (bins < 1) throw BadParameter("gram_histogram: bins must be >= 1");
    if (d.N() < 2) throw BadParameter("gram_histogram: need at least two atoms");
    const GramMatrix g = gram(normalize_columns(d.atoms));
    Histogram h;
    h.edges.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b)
        h.edges[b] = static_cast<double>(b) / static_cast<double>(bins);
    h.fractions.assign(bins, 0.0);
    std::size_t count = 0;
    for (std::size_t i = 0; i < g.dim(); ++i)
        for (std::size_t j = i + 1; j < g.dim(); ++j) {
            const double v = std::min(std::abs(g(i, j)), 1.0);
            std::size_t idx = static_cast<std::size_t>(v * static_cast<double>(bins));
            if (idx >= bins) idx = bins - 1;
            h.fractions[idx] += 1.0;
            ++count;
        }
    for (double& f : h.fractions) f /= static_cast<double>(count);
    return h;
}

}  // namespace csopt

#include "csopt/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "csopt/errors.hpp"

namespace csopt {

double mutual_coherence(const Matrix& d) {
    if (d.cols() == 0) throw BadParameter("mutual_coherence: empty matrix");
    if (d.cols() == 1) {
        (void)normalize_columns(d);  // still reject a zero column
        return 0.0;
    }
    const GramMatrix g = gram(normalize_columns(d));
    double mu = 0.0;
    for (std::size_t i = 0; i < g.dim(); ++i)
        for (std::size_t j = i + 1; j < g.dim(); ++j) mu = std::max(mu, std::abs(g(i, j)));
    return mu;
}

std::optional<double> t_averaged_coherence(const GramMatrix& g, const TParam& t) {
    const std::size_t n = g.dim();
    std::vector<double> offdiag;
    offdiag.reserve(n * n - n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) offdiag.push_back(std::abs(g(i, j)));
    if (t.mode == TParam::Mode::fraction) {
        if (!(t.value > 0.0) || t.value > 1.0)
            throw BadParameter("t_averaged_coherence: fraction must be in (0,1]");
        if (offdiag.empty()) return std::nullopt;
        const std::size_t take = static_cast<std::size_t>(
            std::ceil(t.value * static_cast<double>(offdiag.size())));
        std::sort(offdiag.begin(), offdiag.end(), std::greater<double>());
        double sum = 0.0;
        for (std::size_t i = 0; i < take; ++i) sum += offdiag[i];
        return sum / static_cast<double>(take);
    }
    if (t.value < 0.0 || t.value >= 1.0)
        throw BadParameter("t_averaged_coherence: threshold must be in [0,1)");
    double sum = 0.0;
    std::size_t count = 0;
    for (double v : offdiag)
        if (v > t.value) {
            sum += v;
            ++count;
        }
    if (count == 0) return std::nullopt;
    return sum / static_cast<double>(count);
}

double welch_bound(std::size_t m, std::size_t N) {
    if (m < 1 || m > N || N < 2) throw BadParameter("welch_bound: need 1 <= m <= N, N >= 2");
    const double md = static_cast<double>(m), Nd = static_cast<double>(N);
    return std::sqrt((Nd - md) / (md * (Nd - 1.0)));
}

double recoverable_sparsity_bound(double mu) {
    if (!(mu > 0.0)) throw BadParameter("recoverable_sparsity_bound: mu must be positive");
    return 0.5 * (1.0 + 1.0 / mu);
}

CoherenceReport coherence_report(const Matrix& de, const TParam& t) {
    CoherenceReport rep;
    rep.mu = mutual_coherence(de);
    rep.welch = welch_bound(de.rows(), de.cols());
    if (de.cols() >= 2) {
        const GramMatrix g = gram(normalize_columns(de));
        rep.mu_t = t_averaged_coherence(g, t);
    }
    rep.sparsity_bound = rep.mu > 0.0 ? recoverable_sparsity_bound(rep.mu)
                                      : std::numeric_limits<double>::infinity();
    return rep;
}

}  // namespace csopt

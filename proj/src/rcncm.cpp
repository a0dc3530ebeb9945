#include "csopt/rcncm.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "csopt/errors.hpp"
#include "csopt/kernels.hpp"
#include "csopt/rng.hpp"

namespace csopt {

namespace {

double frobenius_diff(const GramMatrix& a, const GramMatrix& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.mat().size(); ++i) {
        const double d = a.mat().storage()[i] - b.mat().storage()[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double trailing_sum(const EigenDecomposition& ed, std::size_t m) {
    double s = 0.0;
    for (std::size_t i = m; i < ed.eigenvalues.size(); ++i) s += ed.eigenvalues[i];
    return s;
}

// Fixed symmetric zero-diagonal perturbation direction, the same for every
// solve. Breaking exact spectral symmetry this way keeps the warm start
// deterministic while guaranteeing a generic top-m eigenspace even for
// inputs like the identity, whose unperturbed majorization target would be
// diagonal and would freeze the iteration at a maximally infeasible point.
GramMatrix symmetry_breaker(std::size_t n) {
    Rng rng(0x5EEDBA5Eull);
    Matrix r(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = rng.uniform(-1.0, 1.0);
            r(i, j) = v;
            r(j, i) = v;
        }
    return GramMatrix::trusted(std::move(r));
}

void check_correlation_input(const GramMatrix& g, std::size_t m, const char* who) {
    const std::size_t n = g.dim();
    if (n < 2) throw BadParameter(std::string(who) + ": dimension must be at least 2");
    if (m == 0 || m >= n) throw BadParameter(std::string(who) + ": rank bound must be in [1, N)");
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(g(i, i) - 1.0) > 1e-8)
            throw BadParameter(std::string(who) + ": target diagonal entry " + std::to_string(i) +
                               " is not 1");
}

}  // namespace

double penalized_objective(const GramMatrix& x, const GramMatrix& g, double c, std::size_t m) {
    if (x.dim() != g.dim()) throw BadParameter("penalized_objective: dimension mismatch");
    if (c < 0.0) throw BadParameter("penalized_objective: negative penalty");
    if (m == 0 || m > x.dim()) throw BadParameter("penalized_objective: rank bound out of range");
    const EigenDecomposition ed = eig_sym(x);
    return frobenius_diff(x, g) + c * trailing_sum(ed, m);
}

GramMatrix majorize_step(const GramMatrix& x_k, const GramMatrix& g, double c, std::size_t m) {
    const std::size_t n = g.dim();
    if (x_k.dim() != n) throw BadParameter("majorize_step: dimension mismatch");
    if (m == 0 || m >= n) throw BadParameter("majorize_step: rank bound must be in [1, N)");
    if (c < 0.0) throw BadParameter("majorize_step: negative penalty");
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(x_k(i, i) - 1.0) > 1e-6)
            throw BadParameter("majorize_step: iterate diagonal is off by more than 1e-6");

    const EigenDecomposition ed = eig_sym(x_k);
    if (ed.eigenvalues[n - 1] < -1e-6)
        throw BadParameter("majorize_step: iterate is not PSD within 1e-6");

    // shift = (c/2) U U^T, built through the gram kernel so it is exactly
    // symmetric: rows of f are sqrt(c/2) times the top-m eigenvectors.
    const double w = std::sqrt(c / 2.0);
    Matrix f(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) f(i, j) = w * ed.eigenvectors(j, i);
    const Matrix shift = kernels::gram_of_columns(f);
    return nearest_correlation_matrix(g, &shift);
}

namespace {

// rank-m PSD truncation of g keeping a chosen eigenvalue index set, pushed
// onto the correlation set
GramMatrix truncated_start(const GramMatrix& g, const std::vector<std::size_t>& keep) {
    const std::size_t n = g.dim();
    const EigenDecomposition ed = eig_sym(g);
    Matrix f(keep.size(), n);
    std::size_t r = 0;
    for (std::size_t idx : keep) {
        const double w = std::sqrt(std::max(ed.eigenvalues[idx], 0.0));
        for (std::size_t j = 0; j < n; ++j) f(r, j) = w * ed.eigenvectors(j, idx);
        ++r;
    }
    return nearest_correlation_matrix(GramMatrix::trusted(kernels::gram_of_columns(f)));
}

// seeded rank-m correlation matrix: gram of m-dimensional unit columns
GramMatrix seeded_start(std::size_t n, std::size_t m, std::uint64_t seed) {
    Rng rng(seed);
    Matrix f(m, n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            f(i, j) = rng.normal();
            s += f(i, j) * f(i, j);
        }
        s = std::sqrt(s);
        for (std::size_t i = 0; i < m; ++i) f(i, j) /= s;
    }
    return GramMatrix::trusted(kernels::gram_of_columns(f));
}

}  // namespace

MpaResult mpa_solve(const GramMatrix& g, std::size_t m, const MpaConfig& cfg) {
    check_correlation_input(g, m, "mpa_solve");
    if (cfg.c0 <= 0.0 || cfg.c_mult <= 1.0 || cfg.c_max < cfg.c0)
        throw BadParameter("mpa_solve: invalid penalty schedule");
    const std::size_t n = g.dim();

    const auto feasible_result = [&](GramMatrix x, double trailing, std::size_t outer, double c,
                                     MpaResult&& partial) {
        partial.objective = frobenius_diff(x, g);
        partial.g_e = std::move(x);
        partial.trailing_eigensum = trailing;
        partial.outer_iters = outer;
        partial.final_c = c;
        return std::move(partial);
    };

    // Clean warm start: if the rank-m approximation of G is already a
    // correlation matrix, G itself was feasible and the answer is immediate.
    {
        GramMatrix x = nearest_correlation_matrix(rank_m_psd_approx(g, m));
        const double trailing = trailing_sum(eig_sym(x), m);
        if (trailing <= cfg.rank_tol)
            return feasible_result(std::move(x), trailing, 0, 0.0, MpaResult{});
    }

    // The penalized problem is nonconvex: the first majorization locks in a
    // top-m eigenspace, and the one inherited from truncating G is usually
    // but not always the right choice. A small deterministic family of
    // starts hedges that commitment; the cheapest feasible endpoint wins.
    std::vector<GramMatrix> starts;
    {
        // perturbed copy so degenerate spectra still produce a generic
        // top-m eigenspace for the first majorization
        const GramMatrix r = symmetry_breaker(n);
        Matrix a = g.mat();
        for (std::size_t i = 0; i < a.size(); ++i) a.storage()[i] += 1e-8 * r.mat().storage()[i];
        const GramMatrix gp = GramMatrix::trusted(std::move(a));
        starts.push_back(nearest_correlation_matrix(rank_m_psd_approx(gp, m)));
        // the same truncation with the boundary eigenvalue swapped for its
        // first discarded neighbor
        std::vector<std::size_t> keep(m);
        for (std::size_t i = 0; i + 1 < m; ++i) keep[i] = i;
        keep[m - 1] = m;
        starts.push_back(truncated_start(gp, keep));
    }
    for (std::uint64_t i = 0; i < 3; ++i)
        starts.push_back(seeded_start(n, m, 0xB10C5EEDull + 1000003ull * i));

    // Snapping engages once an iterate is this close to the rank-m set;
    // each cycle truncates the trailing eigenvalues exactly and repairs the
    // diagonal, so the objective moves by no more than the mass removed.
    const double snap_threshold = 1e-4;
    const std::size_t snap_max = 100;

    bool have_winner = false;
    MpaResult winner;
    GramMatrix best = starts[0];
    double best_trailing = std::numeric_limits<double>::infinity();

    for (GramMatrix& start : starts) {
        GramMatrix x = std::move(start);
        MpaResult trace;
        double c = cfg.c0;
        try {
            for (std::size_t outer = 1; outer <= cfg.outer_max; ++outer) {
                for (std::size_t inner = 0; inner < cfg.inner_max; ++inner) {
                    GramMatrix next = majorize_step(x, g, c, m);
                    const double change = frobenius_diff(next, x);
                    x = std::move(next);
                    if (change < cfg.inner_tol) break;
                }

                double trailing = trailing_sum(eig_sym(x), m);
                trace.outer_objectives.push_back(frobenius_diff(x, g));
                trace.outer_trailing.push_back(trailing);
                if (trailing < best_trailing) {
                    best_trailing = trailing;
                    best = x;
                }

                if (trailing > cfg.rank_tol && trailing <= snap_threshold) {
                    for (std::size_t cycle = 0; cycle < snap_max && trailing > cfg.rank_tol;
                         ++cycle) {
                        x = nearest_correlation_matrix(rank_m_psd_approx(x, m));
                        trailing = trailing_sum(eig_sym(x), m);
                    }
                    if (trailing < best_trailing) {
                        best_trailing = trailing;
                        best = x;
                    }
                }

                if (trailing <= cfg.rank_tol) {
                    MpaResult res =
                        feasible_result(std::move(x), trailing, outer, c, std::move(trace));
                    if (!have_winner || res.objective < winner.objective) {
                        have_winner = true;
                        winner = std::move(res);
                    }
                    break;
                }

                c *= cfg.c_mult;
                if (c > cfg.c_max) break;
            }
        } catch (const NcmNoConvergence&) {
            // a stalled subproblem disqualifies this start, not the solve
        }
    }

    if (have_winner) return winner;
    throw MpaNoConvergence("mpa_solve: trailing eigenvalue sum " + format_real(best_trailing) +
                               " still above tolerance " + format_real(cfg.rank_tol) +
                               " with the penalty schedule exhausted",
                           best.mat().storage(), n, best_trailing);
}

}  // namespace csopt

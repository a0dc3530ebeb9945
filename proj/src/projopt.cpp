#include "csopt/projopt.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>

#include "csopt/errors.hpp"
#include "csopt/kernels.hpp"
#include "csopt/rng.hpp"

namespace csopt {

namespace {

Matrix gaussian_rows_normalized(std::size_t m, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    Matrix p(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) p(i, j) = rng.normal();
    for (std::size_t i = 0; i < m; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += p(i, j) * p(i, j);
        const double norm = std::sqrt(s);
        if (norm <= 1e-12) throw ZeroColumn("optimize: degenerate random projection row", i);
        for (std::size_t j = 0; j < n; ++j) p(i, j) /= norm;
    }
    return p;
}

Matrix initial_projection(const OptimizerConfig& cfg, std::size_t n) {
    if (cfg.initial_p != nullptr) {
        if (cfg.initial_p->rows() != cfg.m || cfg.initial_p->cols() != n)
            throw BadParameter("optimize: initial projection has the wrong shape");
        return *cfg.initial_p;
    }
    return gaussian_rows_normalized(cfg.m, n, cfg.seed);
}

void check_iter_config(const OptimizerConfig& cfg, std::size_t n, bool shrink_mode) {
    if (cfg.m < 1 || cfg.m > n) throw BadParameter("optimize: m must lie in [1, n]");
    if (cfg.max_iters < 1) throw BadParameter("optimize: max_iters must be at least 1");
    if (shrink_mode) {
        if (!(cfg.shrink_alpha > 0.0) || !(cfg.shrink_alpha < 1.0))
            throw BadParameter("optimize: shrink_alpha must lie in (0, 1)");
        if (cfg.t.mode == TParam::Mode::fraction) {
            if (!(cfg.t.value > 0.0) || !(cfg.t.value <= 1.0))
                throw BadParameter("optimize: t fraction must lie in (0, 1]");
        } else {
            if (!(cfg.t.value >= 0.0)) throw BadParameter("optimize: t threshold must be nonnegative");
        }
    } else {
        if (!(cfg.step_alpha > 0.0) || !(cfg.step_alpha <= 1.0))
            throw BadParameter("optimize: step_alpha must lie in (0, 1]");
    }
}

// Shared loop for the shrink and clip families, with and without a restored
// dictionary Gram. `target` carries the Gram to preserve; null means the
// identity target of the plain variants. The arithmetic is kept literally
// identical across that choice (subtract the target entry, transform, add it
// back) so that a dictionary whose Gram is exactly the identity follows the
// same floating-point path through both variants.
OptimizerResult iterate_engine(const Dictionary& d, const OptimizerConfig& cfg,
                               const GramMatrix* target, bool shrink_mode) {
    const std::size_t n = d.n();
    const std::size_t bign = d.N();
    check_iter_config(cfg, n, shrink_mode);

    const Matrix pinv_d = pinv(d.atoms);
    Matrix p = initial_projection(cfg, n);

    auto target_off = [&](std::size_t i, std::size_t j) {
        return target != nullptr ? (*target)(i, j) : 0.0;
    };

    std::vector<double> prev;  // clip-family convex combination state
    bool prev_ready = false;

    OptimizerResult res;
    res.p = p;
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> doubled;  // both orderings of each off-diagonal pair

    for (std::size_t k = 1; k <= cfg.max_iters; ++k) {
        const Matrix de_raw = kernels::matmul(p, d.atoms);
        Matrix de;
        try {
            de = normalize_columns(de_raw);
        } catch (const ZeroColumn& e) {
            throw ZeroColumn("optimize: effective atom collapsed at iteration " +
                                 std::to_string(k),
                             e.index);
        }
        const GramMatrix ge = gram(de);

        double obj = 0.0;
        for (std::size_t i = 0; i < bign; ++i)
            for (std::size_t j = 0; j < bign; ++j) {
                if (i == j) continue;
                obj = std::max(obj, std::abs(ge(i, j) - target_off(i, j)));
            }
        res.objective_trace.push_back(obj);

        const double improvement = best - obj;
        if (obj < best) {
            best = obj;
            res.p = p;
            res.best_iteration = k;
        }
        if (obj == 0.0) {
            res.converged = true;
            break;
        }
        if (k >= 2 && improvement < cfg.stagnation_tol) {
            res.converged = true;
            break;
        }
        if (k == cfg.max_iters) break;

        Matrix wh(bign, bign);
        if (shrink_mode) {
            double t_val;
            if (cfg.t.mode == TParam::Mode::fraction) {
                doubled.clear();
                doubled.reserve(bign * (bign - 1));
                for (std::size_t i = 0; i < bign; ++i)
                    for (std::size_t j = i + 1; j < bign; ++j) {
                        const double a = std::abs(ge(i, j) - target_off(i, j));
                        doubled.push_back(a);
                        doubled.push_back(a);
                    }
                std::sort(doubled.begin(), doubled.end(), std::greater<double>());
                const double count = static_cast<double>(doubled.size());
                std::size_t idx = static_cast<std::size_t>(std::ceil(cfg.t.value * count));
                if (idx < 1) idx = 1;
                if (idx > doubled.size()) idx = doubled.size();
                t_val = doubled[idx - 1];
            } else {
                t_val = cfg.t.value;
            }
            for (std::size_t i = 0; i < bign; ++i) {
                wh(i, i) = target != nullptr ? (*target)(i, i) : 1.0;
                for (std::size_t j = i + 1; j < bign; ++j) {
                    const double theta = ge(i, j) - target_off(i, j);
                    const double v = shrink_elad(theta, t_val, cfg.shrink_alpha) + target_off(i, j);
                    wh(i, j) = v;
                    wh(j, i) = v;
                }
            }
        } else {
            const double mu_g = welch_bound(cfg.m, bign);
            if (!prev_ready) {
                prev.assign(bign * bign, 0.0);
                for (std::size_t i = 0; i < bign; ++i)
                    for (std::size_t j = i + 1; j < bign; ++j) prev[i * bign + j] = ge(i, j);
                prev_ready = true;
            }
            for (std::size_t i = 0; i < bign; ++i) {
                wh(i, i) = target != nullptr ? (*target)(i, i) : 1.0;
                for (std::size_t j = i + 1; j < bign; ++j) {
                    const double theta = ge(i, j) - target_off(i, j);
                    const double clipped = std::min(mu_g, std::max(-mu_g, theta));
                    const double proj = clipped + target_off(i, j);
                    const double comb = cfg.step_alpha * proj + (1.0 - cfg.step_alpha) * prev[i * bign + j];
                    prev[i * bign + j] = comb;
                    wh(i, j) = comb;
                    wh(j, i) = comb;
                }
            }
        }

        const GramMatrix low = rank_m_psd_approx(GramMatrix::trusted(std::move(wh)), cfg.m);
        const Matrix dk = psd_sqrt_factor(low, cfg.m);
        p = kernels::matmul(dk, pinv_d);
    }

    res.iterations_run = res.objective_trace.size();
    res.best_objective = best;
    return res;
}

}  // namespace

std::string algo_label(Algo a) {
    switch (a) {
        case Algo::random: return "random";
        case Algo::elad: return "elad";
        case Algo::xu: return "xu";
        case Algo::duarte: return "duarte";
        case Algo::rcncm_elad: return "rcncm-elad";
        case Algo::rcncm_xu: return "rcncm-xu";
        case Algo::rcncm_duarte: return "rcncm-duarte";
    }
    throw BadParameter("algo_label: unknown algorithm");
}

Algo algo_from_label(const std::string& label) {
    if (label == "random") return Algo::random;
    if (label == "elad") return Algo::elad;
    if (label == "xu") return Algo::xu;
    if (label == "duarte") return Algo::duarte;
    if (label == "rcncm-elad") return Algo::rcncm_elad;
    if (label == "rcncm-xu") return Algo::rcncm_xu;
    if (label == "rcncm-duarte") return Algo::rcncm_duarte;
    throw BadParameter("algo_from_label: unknown algorithm '" + label + "'");
}

double shrink_elad(double g, double t_val, double alpha) {
    const double a = std::abs(g);
    if (a <= alpha * t_val) return g;
    if (a <= t_val) return std::copysign(alpha * t_val, g);
    return alpha * g;
}

GramMatrix project_lambda(const GramMatrix& g, double mu_g) {
    if (!(mu_g >= 0.0)) throw BadParameter("project_lambda: negative clip level");
    const std::size_t n = g.dim();
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        out(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = std::min(mu_g, std::max(-mu_g, g(i, j)));
            out(i, j) = v;
            out(j, i) = v;
        }
    }
    return GramMatrix::trusted(std::move(out));
}

OptimizerResult optimize_random(std::size_t n, const OptimizerConfig& cfg) {
    if (cfg.m < 1 || cfg.m > n) throw BadParameter("optimize: m must lie in [1, n]");
    OptimizerResult res;
    res.p = gaussian_rows_normalized(cfg.m, n, cfg.seed);
    res.objective_trace = {0.0};
    res.iterations_run = 1;
    res.converged = true;
    res.best_objective = 0.0;
    res.best_iteration = 1;
    return res;
}

OptimizerResult optimize_elad(const Dictionary& d, const OptimizerConfig& cfg) {
    return iterate_engine(d, cfg, nullptr, true);
}

OptimizerResult optimize_xu(const Dictionary& d, const OptimizerConfig& cfg) {
    return iterate_engine(d, cfg, nullptr, false);
}

OptimizerResult optimize_rcncm_elad(const Dictionary& d, const OptimizerConfig& cfg) {
    const GramMatrix g = gram(normalize_columns(d.atoms));
    return iterate_engine(d, cfg, &g, true);
}

OptimizerResult optimize_rcncm_xu(const Dictionary& d, const OptimizerConfig& cfg) {
    const GramMatrix g = gram(normalize_columns(d.atoms));
    return iterate_engine(d, cfg, &g, false);
}

OptimizerResult optimize_duarte(const Dictionary& d, const OptimizerConfig& cfg) {
    const std::size_t n = d.n();
    const std::size_t bign = d.N();
    if (cfg.m < 1 || cfg.m > n) throw BadParameter("optimize: m must lie in [1, n]");

    // One-sided Jacobi on the atom columns. A pair is rotated only when its
    // normalized inner product exceeds a noise floor well above machine
    // epsilon: rotating pairs whose coupling is pure roundoff would smear
    // near-degenerate singular directions into each other, and the whole
    // point of this algorithm on near-orthogonal dictionaries is that the
    // discarded directions drop out of P*D exactly.
    Matrix w = d.atoms;
    const double orth_tol = 1e-13;
    const std::size_t max_sweeps = 64;

    // Rotations preserve the total Frobenius mass. Columns squeezed below
    // its roundoff floor are numerically zero; excluding them keeps the
    // sweep from endlessly churning the N - n excess columns of a wide
    // dictionary against each other.
    double fro2 = 0.0;
    for (double v : w.storage()) fro2 += v * v;
    const double dead2 = 1e-30 * fro2;

    std::size_t sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p < bign; ++p)
            for (std::size_t q = p + 1; q < bign; ++q) {
                double gpp = 0.0, gqq = 0.0, gpq = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    gpp += w(i, p) * w(i, p);
                    gqq += w(i, q) * w(i, q);
                    gpq += w(i, p) * w(i, q);
                }
                if (gpp <= dead2 || gqq <= dead2) continue;
                if (std::abs(gpq) <= orth_tol * std::sqrt(gpp) * std::sqrt(gqq)) continue;
                const double tau = (gqq - gpp) / (2.0 * gpq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < n; ++i) {
                    const double wp = w(i, p);
                    const double wq = w(i, q);
                    w(i, p) = c * wp - s * wq;
                    w(i, q) = s * wp + c * wq;
                }
                rotated = true;
            }
        if (!rotated) break;
    }
    if (sweep == max_sweeps) throw NoConvergence("optimize: singular value sweeps stalled");

    std::vector<double> sigma(bign);
    for (std::size_t j = 0; j < bign; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += w(i, j) * w(i, j);
        sigma[j] = std::sqrt(acc);
    }
    std::vector<std::size_t> order(bign);
    for (std::size_t j = 0; j < bign; ++j) order[j] = j;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });
    const double lead = sigma[order[0]] * sigma[order[0]];
    std::size_t rank = 0;
    for (std::size_t j = 0; j < bign; ++j)
        if (sigma[j] * sigma[j] > 1e-12 * lead) ++rank;
    if (rank < cfg.m)
        throw RankDeficient("optimize: dictionary frame rank below the requested m");

    Matrix p(cfg.m, n);
    for (std::size_t i = 0; i < cfg.m; ++i) {
        const std::size_t col = order[i];
        const double sv = sigma[col];
        const double scale = (cfg.normalize_rows ? 1.0 : 1.0 / sv) / sv;
        for (std::size_t j = 0; j < n; ++j) p(i, j) = scale * w(j, col);
    }

    const GramMatrix ge = gram(kernels::matmul(p, d.atoms));
    const GramMatrix g = gram(d.atoms);
    double acc = 0.0;
    for (std::size_t i = 0; i < d.N(); ++i)
        for (std::size_t j = 0; j < d.N(); ++j) {
            const double diff = ge(i, j) - g(i, j);
            acc += diff * diff;
        }

    OptimizerResult res;
    res.p = std::move(p);
    res.objective_trace = {std::sqrt(acc)};
    res.iterations_run = 1;
    res.converged = true;
    res.best_objective = res.objective_trace[0];
    res.best_iteration = 1;
    return res;
}

OptimizerResult optimize_rcncm_duarte(const Dictionary& d, const OptimizerConfig& cfg) {
    const std::size_t n = d.n();
    const std::size_t bign = d.N();
    if (cfg.m < 1 || cfg.m > n) throw BadParameter("optimize: m must lie in [1, n]");
    if (cfg.m >= bign) throw BadParameter("optimize: m must be below the dictionary size");

    const GramMatrix g = gram(normalize_columns(d.atoms));
    const MpaResult sol = mpa_solve(g, cfg.m, cfg.mpa);
    const Matrix de_star = psd_sqrt_factor(sol.g_e, cfg.m);
    Matrix p = kernels::matmul(de_star, pinv(d.atoms));

    OptimizerResult res;
    res.p = std::move(p);
    res.objective_trace = sol.outer_objectives.empty()
                              ? std::vector<double>{sol.objective}
                              : sol.outer_objectives;
    res.iterations_run = res.objective_trace.size();
    res.converged = true;
    res.best_objective = sol.objective;
    res.best_iteration = res.objective_trace.size();
    return res;
}

OptimizerResult optimize(const Dictionary& d, const OptimizerConfig& cfg) {
    switch (cfg.algo) {
        case Algo::random: return optimize_random(d.n(), cfg);
        case Algo::elad: return optimize_elad(d, cfg);
        case Algo::xu: return optimize_xu(d, cfg);
        case Algo::duarte: return optimize_duarte(d, cfg);
        case Algo::rcncm_elad: return optimize_rcncm_elad(d, cfg);
        case Algo::rcncm_xu: return optimize_rcncm_xu(d, cfg);
        case Algo::rcncm_duarte: return optimize_rcncm_duarte(d, cfg);
    }
    throw BadParameter("optimize: unknown algorithm");
}

std::vector<OptimizerResult> run_step_alpha_sweep(const Dictionary& d,
                                                  const OptimizerConfig& base,
                                                  const std::vector<double>& step_alphas) {
    if (base.algo != Algo::xu && base.algo != Algo::rcncm_xu)
        throw BadParameter("run_step_alpha_sweep: only the clip-family algorithms take a mixing weight");
    if (step_alphas.empty()) throw BadParameter("run_step_alpha_sweep: empty sweep");
    std::vector<OptimizerResult> out;
    out.reserve(step_alphas.size());
    for (double a : step_alphas) {
        OptimizerConfig cfg = base;
        cfg.step_alpha = a;
        out.push_back(optimize(d, cfg));
    }
    return out;
}

}  // namespace csopt

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "csopt/coherence.hpp"
#include "csopt/dictionaries.hpp"
#include "csopt/matops.hpp"
#include "csopt/matrix.hpp"
#include "csopt/rcncm.hpp"

namespace csopt {

enum class Algo {
    random,
    elad,
    xu,
    duarte,
    rcncm_elad,
    rcncm_xu,
    rcncm_duarte,
};

std::string algo_label(Algo a);
Algo algo_from_label(const std::string& label);

struct OptimizerConfig {
    Algo algo = Algo::random;
    std::size_t m = 0;
    std::size_t max_iters = 100;
    TParam t;                      // shrink threshold selector (elad family)
    double shrink_alpha = 0.9;
    double step_alpha = 0.5;       // mixing weight (xu family)
    double stagnation_tol = 1e-6;  // minimum improvement of the running best
    std::uint64_t seed = 0;
    bool normalize_rows = false;   // unit-norm projection rows (duarte)
    MpaConfig mpa;                 // penalty solver knobs (rcncm-duarte)

    // When set, iterative algorithms start from this matrix instead of the
    // seeded Gaussian; must be m x n. Not owned.
    const Matrix* initial_p = nullptr;
};

struct OptimizerResult {
    Matrix p;  // m x n acquisition matrix, the best iterate visited
    std::vector<double> objective_trace;  // one entry per iteration run
    std::size_t iterations_run = 0;
    bool converged = false;
    double best_objective = 0.0;
    std::size_t best_iteration = 0;  // 1-based index into objective_trace
};

// Three-branch shrink: values up to alpha*t pass through, the band up to t
// collapses onto +-alpha*t, larger values scale by alpha. Sign preserving
// and never magnitude increasing.
double shrink_elad(double g, double t_val, double alpha);

// Unit diagonal, off-diagonal entries clipped into [-mu_g, mu_g].
GramMatrix project_lambda(const GramMatrix& g, double mu_g);

// Seeded Gaussian acquisition matrix with unit-norm rows. The trace holds a
// single zero: there is no objective without a dictionary.
OptimizerResult optimize_random(std::size_t n, const OptimizerConfig& cfg);

// Shrink the off-diagonals of the effective Gram toward zero, reproject to
// rank m, recover P through the dictionary pseudoinverse. Objective: max
// off-diagonal |G_e| after column normalization.
OptimizerResult optimize_elad(const Dictionary& d, const OptimizerConfig& cfg);

// Clip the effective Gram at the Welch bound and mix with the previous
// iterate before the rank-m reprojection. Objective as in optimize_elad.
OptimizerResult optimize_xu(const Dictionary& d, const OptimizerConfig& cfg);

// Closed form from the SVD of D: P = S^-1 U^T restricted to the top m
// components (U^T alone with normalize_rows). Single shot. Objective:
// ||G_e - G||_F of the returned matrix.
OptimizerResult optimize_duarte(const Dictionary& d, const OptimizerConfig& cfg);

// As optimize_elad / optimize_xu, but operating on the difference between
// the effective Gram and the dictionary Gram, which is restored afterwards;
// large inherited correlations are left alone instead of being fought.
// Objective: max off-diagonal |G_e - G|.
OptimizerResult optimize_rcncm_elad(const Dictionary& d, const OptimizerConfig& cfg);
OptimizerResult optimize_rcncm_xu(const Dictionary& d, const OptimizerConfig& cfg);

// Rank-constrained nearest correlation matrix solve of the dictionary Gram,
// factored and mapped back through the pseudoinverse. Keeps every effective
// atom at unit norm by construction.
OptimizerResult optimize_rcncm_duarte(const Dictionary& d, const OptimizerConfig& cfg);

// Dispatch on cfg.algo.
OptimizerResult optimize(const Dictionary& d, const OptimizerConfig& cfg);

// One optimize_xu / optimize_rcncm_xu run per mixing weight, sharing every
// other setting. base.algo must be one of the two.
std::vector<OptimizerResult> run_step_alpha_sweep(const Dictionary& d,
                                                  const OptimizerConfig& base,
                                                  const std::vector<double>& step_alphas);

}  // namespace csopt

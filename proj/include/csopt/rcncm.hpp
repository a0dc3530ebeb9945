#pragma once

#include <cstddef>
#include <vector>

#include "csopt/matops.hpp"

namespace csopt {

// Penalty solver for the rank-constrained nearest correlation matrix
// problem: find the correlation matrix X (PSD, unit diagonal) of rank <= m
// closest to G in Frobenius norm.
struct MpaConfig {
    double c0 = 1.0;        // initial penalty weight
    double c_mult = 10.0;   // geometric growth factor
    double c_max = 1e8;     // give up beyond this weight
    double rank_tol = 1e-8; // accepted trailing eigenvalue sum
    double inner_tol = 1e-7;    // Frobenius change ending the inner loop
    std::size_t inner_max = 200;
    std::size_t outer_max = 20;
};

struct MpaResult {
    GramMatrix g_e;
    double trailing_eigensum = 0.0;
    std::size_t outer_iters = 0;
    double final_c = 0.0;
    double objective = 0.0;  // ||g_e - G||_F

    // One entry per outer iteration (after its inner loop finished).
    std::vector<double> outer_objectives;
    std::vector<double> outer_trailing;
};

// ||X - G||_F + c * (sum of the N-m smallest eigenvalues of X). The penalty
// term vanishes exactly on matrices of rank <= m.
double penalized_objective(const GramMatrix& x, const GramMatrix& g, double c, std::size_t m);

// One majorize-minimize step at penalty c: the concave part of the penalty
// (negated sum of the m largest eigenvalues) is linearized at x_k via its
// top-m eigenvectors U, which turns the subproblem into a nearest
// correlation matrix computation with target G + (c/2) U U^T. Requires x_k
// itself to be nearly feasible (PSD and unit diagonal within 1e-6).
GramMatrix majorize_step(const GramMatrix& x_k, const GramMatrix& g, double c, std::size_t m);

// Full solve: warm start from the rank-m approximation of G pushed onto the
// correlation set, then raise c geometrically, running majorize_step to a
// fixed point at each level. Once the iterate sits close to the rank-m set,
// a finishing loop alternates exact rank truncation with the correlation
// projection until the trailing eigenvalue sum drops under rank_tol.
// Throws MpaNoConvergence (carrying the best iterate) when the penalty
// schedule is exhausted first.
MpaResult mpa_solve(const GramMatrix& g, std::size_t m, const MpaConfig& cfg = {});

}  // namespace csopt

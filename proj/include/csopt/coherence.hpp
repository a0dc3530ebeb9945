#pragma once

#include <cstddef>
#include <optional>

#include "csopt/matops.hpp"
#include "csopt/matrix.hpp"

namespace csopt {

// Coherence-averaging parameter: either an absolute threshold on |G_ij| or a
// fraction selecting the top share of off-diagonal magnitudes.
struct TParam {
    enum class Mode { fraction, threshold };
    Mode mode = Mode::fraction;
    double value = 0.2;

    static TParam fraction(double v) { return {Mode::fraction, v}; }
    static TParam threshold(double v) { return {Mode::threshold, v}; }
};

// Largest off-diagonal magnitude of the Gram of the column-normalized input;
// 0 for a single column. Throws ZeroColumn for a zero column.
double mutual_coherence(const Matrix& d);

// Mean of selected off-diagonal magnitudes of g (both triangles counted).
// Threshold mode averages entries strictly above t and returns nullopt when
// none qualify; fraction mode averages the top ceil(t * (N^2 - N)) entries.
// g must be the Gram of a column-normalized matrix.
std::optional<double> t_averaged_coherence(const GramMatrix& g, const TParam& t);

// sqrt((N - m) / (m (N - 1))): the coherence floor for an m x N frame.
double welch_bound(std::size_t m, std::size_t N);

// (1 + 1/mu) / 2: sparsity level below which recovery is guaranteed.
double recoverable_sparsity_bound(double mu);

struct CoherenceReport {
    double mu = 0.0;
    std::optional<double> mu_t;
    double welch = 0.0;
    double sparsity_bound = 0.0;  // +inf when mu == 0
};

// Report for an effective dictionary de (m_rows x N).
CoherenceReport coherence_report(const Matrix& de, const TParam& t);

}  // namespace csopt

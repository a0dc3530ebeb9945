#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "csopt/dictionaries.hpp"
#include "csopt/projopt.hpp"

namespace csopt {

// Constructor recipe for one dictionary. Which optional fields must be
// present (and which must be absent) depends on `kind`; build_dictionary
// enforces that.
struct DictionarySpec {
    std::string kind;  // gaussian | perturbed-orth | dirac-haar | swt-sym4 | correlated
    std::size_t n = 0;
    std::optional<std::size_t> big_n;   // atom count, kinds with N > n
    std::optional<double> eps;          // perturbation size, perturbed-orth
    std::optional<std::size_t> levels;  // decomposition depth, swt-sym4
    std::optional<std::size_t> latent;  // generator count, correlated
    std::optional<std::uint64_t> seed;  // randomized kinds only
};

Dictionary build_dictionary(const DictionarySpec& spec);

struct AlgorithmSpec {
    std::string label;   // unique row label; sweep members get "<family>@<alpha>"
    std::string family;  // base algorithm label; equals label outside sweeps
    bool swept = false;
    OptimizerConfig cfg;
};

struct SolverSpec {
    std::string name;           // omp | sl0 | iht
    std::optional<double> eps;  // residual target override
    std::string k_mode = "oracle";
};

struct ExperimentConfig {
    DictionarySpec dictionary;
    std::size_t m = 0;
    std::vector<AlgorithmSpec> algorithms;
    std::vector<SolverSpec> solvers;
    std::vector<std::size_t> k_values;
    std::optional<double> snr_db;  // empty = noiseless
    std::size_t trials = 0;
    double success_mse = 1e-6;
    std::uint64_t master_seed = 0;
};

struct TrialRecord {
    std::string algorithm;
    std::string solver;
    std::size_t k = 0;
    double snr_db = 0.0;  // +infinity when noiseless
    std::size_t trial = 0;
    double mse = 0.0;
    bool success = false;
    std::size_t solver_iters = 0;
};

struct SummaryRow {
    std::string algorithm;
    std::string solver;
    std::size_t k = 0;
    double mean_mse = 0.0;
    double success_frac = 0.0;
    std::size_t n_trials = 0;
};

// Parse and validate the experiment JSON. Unknown keys are rejected at every
// level and all defaults are materialized into the returned value. Throws
// ParseError for malformed JSON, ValidationError naming the offending field
// otherwise.
ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<config>");
ExperimentConfig load_config(const std::string& path);

// Build the dictionary, optimize one acquisition matrix per algorithm, then
// run every (algorithm, solver, k, trial) tuple. Records come back in that
// nested order. Per-trial seeds depend only on (master_seed, k, trial), so
// results are byte-stable across thread counts and trial-count extensions.
// threads <= 0 keeps the runtime default.
std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg, int threads = 0);

// Per (algorithm, solver, k) means in first-appearance order. Sweep families
// (labels "<family>@<alpha>") additionally get one "<family>:best" row per
// (solver, k) holding the member with the highest success fraction, placed
// after the family's member rows.
std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records);

void write_trials_csv(const std::string& path, const std::vector<TrialRecord>& records);
void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows);
std::vector<TrialRecord> read_trials_csv(const std::string& path);

}  // namespace csopt

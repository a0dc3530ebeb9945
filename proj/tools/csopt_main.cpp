#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "csopt/coherence.hpp"
#include "csopt/dictionaries.hpp"
#include "csopt/errors.hpp"
#include "csopt/harness.hpp"
#include "csopt/kernels.hpp"
#include "csopt/matops.hpp"
#include "csopt/matrix.hpp"
#include "csopt/projopt.hpp"
#include "csopt/recovery.hpp"

namespace {

using namespace csopt;

std::vector<double> read_vector_file(const std::string& path) {
    const Matrix a = read_matrix_file(path);
    if (a.cols() != 1 && a.rows() != 1)
        throw BadParameter("expected a single-row or single-column matrix in " + path);
    std::vector<double> v;
    v.reserve(a.rows() * a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) v.push_back(a(i, j));
    return v;
}

void write_vector_file(const std::string& path, const std::vector<double>& v) {
    Matrix a(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) a(i, 0) = v[i];
    write_matrix_file(path, a);
}

void write_trace_file(const std::string& path, const std::vector<double>& trace) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << "iter,objective\n";
    for (std::size_t i = 0; i < trace.size(); ++i)
        f << (i + 1) << ',' << format_real(trace[i]) << '\n';
    f.flush();
    if (!f) throw IoError("write failed: " + path);
}

void write_hist_file(const std::string& path, const Histogram& h) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << "bin_low,bin_high,frac\n";
    for (std::size_t i = 0; i < h.fractions.size(); ++i)
        f << format_real(h.edges[i]) << ',' << format_real(h.edges[i + 1]) << ','
          << format_real(h.fractions[i]) << '\n';
    f.flush();
    if (!f) throw IoError("write failed: " + path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acquisition matrix design and sparse recovery experiments"};
    app.require_subcommand(1);

    // dict make / dict hist
    auto* dict = app.add_subcommand("dict", "Dictionary construction and inspection");
    dict->require_subcommand(1);

    auto* make = dict->add_subcommand("make", "Construct a dictionary and write it to a file");
    std::string mk_kind, mk_out;
    std::size_t mk_n = 0, mk_bign = 0, mk_levels = 0, mk_latent = 0;
    double mk_eps = 0.0;
    std::uint64_t mk_seed = 0;
    make->add_option("--kind", mk_kind, "gaussian | perturbed-orth | dirac-haar | swt-sym4 | correlated")
        ->required()
        ->check(CLI::IsMember({"gaussian", "perturbed-orth", "dirac-haar", "swt-sym4", "correlated"}));
    make->add_option("--n", mk_n, "signal dimension")->required();
    auto* mk_bign_opt = make->add_option("--N", mk_bign, "atom count");
    auto* mk_eps_opt = make->add_option("--eps", mk_eps, "perturbation size");
    auto* mk_levels_opt = make->add_option("--levels", mk_levels, "wavelet levels");
    auto* mk_latent_opt = make->add_option("--latent", mk_latent, "latent generator count");
    auto* mk_seed_opt = make->add_option("--seed", mk_seed, "construction seed");
    make->add_option("--out", mk_out, "output matrix file")->required();
    make->callback([&] {
        DictionarySpec spec;
        spec.kind = mk_kind;
        spec.n = mk_n;
        if (mk_bign_opt->count()) spec.big_n = mk_bign;
        if (mk_eps_opt->count()) spec.eps = mk_eps;
        if (mk_levels_opt->count()) spec.levels = mk_levels;
        if (mk_latent_opt->count()) spec.latent = mk_latent;
        if (mk_seed_opt->count()) spec.seed = mk_seed;
        const Dictionary d = build_dictionary(spec);
        write_matrix_file(mk_out, d.atoms);
    });

    auto* hist = dict->add_subcommand("hist", "Histogram of off-diagonal Gram magnitudes");
    std::string h_dict, h_out;
    std::size_t h_bins = 0;
    hist->add_option("--dict", h_dict, "dictionary matrix file")->required();
    hist->add_option("--bins", h_bins, "bin count")->required();
    hist->add_option("--out", h_out, "output CSV")->required();
    hist->callback([&] {
        Dictionary d{read_matrix_file(h_dict), "file"};
        write_hist_file(h_out, gram_histogram(d, h_bins));
    });

    // optimize
    auto* opt = app.add_subcommand("optimize", "Compute an acquisition matrix for a dictionary");
    std::string o_algo, o_dict, o_out, o_trace, o_tmode = "fraction";
    std::size_t o_m = 0, o_iters = 0;
    double o_t = 0.0, o_shrink = 0.0, o_step = 0.0, o_c0 = 0.0, o_cmult = 0.0, o_rtol = 0.0;
    std::uint64_t o_seed = 0;
    bool o_normrows = false;
    opt->add_option("--algo", o_algo, "random | elad | xu | duarte | rcncm-elad | rcncm-xu | rcncm-duarte")
        ->required();
    opt->add_option("--dict", o_dict, "dictionary matrix file")->required();
    opt->add_option("--m", o_m, "projection row count")->required();
    auto* o_iters_opt = opt->add_option("--iters", o_iters, "iteration budget");
    auto* o_t_opt = opt->add_option("--t", o_t, "shrink threshold parameter");
    opt->add_option("--t-mode", o_tmode, "fraction | threshold")
        ->check(CLI::IsMember({"fraction", "threshold"}));
    auto* o_shrink_opt = opt->add_option("--shrink-alpha", o_shrink, "shrink factor");
    auto* o_step_opt = opt->add_option("--step-alpha", o_step, "mixing weight");
    auto* o_seed_opt = opt->add_option("--seed", o_seed, "initialization seed");
    opt->add_flag("--normalize-rows", o_normrows, "unit-norm projection rows");
    auto* o_c0_opt = opt->add_option("--c0", o_c0, "initial penalty weight");
    auto* o_cmult_opt = opt->add_option("--c-mult", o_cmult, "penalty growth factor");
    auto* o_rtol_opt = opt->add_option("--rank-tol", o_rtol, "trailing eigensum tolerance");
    opt->add_option("--out", o_out, "output matrix file")->required();
    auto* o_trace_opt = opt->add_option("--trace", o_trace, "objective trace CSV");
    opt->callback([&] {
        OptimizerConfig cfg;
        cfg.algo = algo_from_label(o_algo);
        cfg.m = o_m;
        if (o_iters_opt->count()) cfg.max_iters = o_iters;
        cfg.t.mode = o_tmode == "threshold" ? TParam::Mode::threshold : TParam::Mode::fraction;
        if (o_t_opt->count()) cfg.t.value = o_t;
        if (o_shrink_opt->count()) cfg.shrink_alpha = o_shrink;
        if (o_step_opt->count()) cfg.step_alpha = o_step;
        if (o_seed_opt->count()) cfg.seed = o_seed;
        cfg.normalize_rows = o_normrows;
        if (o_c0_opt->count()) cfg.mpa.c0 = o_c0;
        if (o_cmult_opt->count()) cfg.mpa.c_mult = o_cmult;
        if (o_rtol_opt->count()) cfg.mpa.rank_tol = o_rtol;
        const Dictionary d{read_matrix_file(o_dict), "file"};
        const OptimizerResult res = optimize(d, cfg);
        write_matrix_file(o_out, res.p);
        if (o_trace_opt->count()) write_trace_file(o_trace, res.objective_trace);
        std::cout << "iterations=" << res.iterations_run << '\n'
                  << "converged=" << (res.converged ? "true" : "false") << '\n'
                  << "best_objective=" << format_real(res.best_objective) << '\n'
                  << "best_iteration=" << res.best_iteration << '\n';
    });

    // coherence
    auto* coh = app.add_subcommand("coherence", "Coherence report for a projected dictionary");
    std::string c_dict, c_proj;
    coh->add_option("--dict", c_dict, "dictionary matrix file")->required();
    coh->add_option("--proj", c_proj, "acquisition matrix file")->required();
    coh->callback([&] {
        const Matrix d = read_matrix_file(c_dict);
        const Matrix p = read_matrix_file(c_proj);
        if (p.cols() != d.rows())
            throw BadParameter("projection columns must match dictionary rows");
        const Matrix de = kernels::matmul(p, d);
        const CoherenceReport rep = coherence_report(de, TParam::fraction(0.2));
        std::cout << "mu=" << format_real(rep.mu) << '\n'
                  << "mu_t=" << (rep.mu_t ? format_real(*rep.mu_t) : "nan") << '\n'
                  << "welch_bound=" << format_real(rep.welch) << '\n'
                  << "sparsity_bound=" << format_real(rep.sparsity_bound) << '\n';
    });

    // recover
    auto* rec = app.add_subcommand("recover", "Sparse recovery from measurements");
    std::string r_de, r_y, r_solver, r_out;
    double r_eps = 0.0;
    std::size_t r_k = 0;
    rec->add_option("--De", r_de, "effective dictionary matrix file")->required();
    rec->add_option("--y", r_y, "measurement vector file")->required();
    rec->add_option("--solver", r_solver, "omp | sl0 | iht")
        ->required()
        ->check(CLI::IsMember({"omp", "sl0", "iht"}));
    auto* r_eps_opt = rec->add_option("--eps", r_eps, "residual target");
    auto* r_k_opt = rec->add_option("--k", r_k, "sparsity level");
    r_eps_opt->excludes(r_k_opt);
    rec->add_option("--out", r_out, "output coefficient vector file")->required();
    rec->callback([&] {
        const Matrix de = read_matrix_file(r_de);
        const std::vector<double> y = read_vector_file(r_y);
        SolveResult sol;
        if (r_solver == "omp") {
            const double eps = r_eps_opt->count() ? r_eps : (r_k_opt->count() ? 0.0 : 1e-9);
            const std::size_t cap = r_k_opt->count() ? r_k : de.rows();
            sol = omp_eps(de, y, eps, cap);
        } else if (r_solver == "sl0") {
            if (r_k_opt->count()) throw BadParameter("sl0 takes --eps, not --k");
            Sl0Params params;
            if (r_eps_opt->count()) params.eps = r_eps;
            sol = sl0(de, y, params);
        } else {
            if (!r_k_opt->count()) throw BadParameter("iht requires --k");
            sol = iht(de, y, r_k);
        }
        write_vector_file(r_out, to_dense(sol.gamma));
        std::cout << "iterations=" << sol.iterations << '\n';
    });

    // experiment
    auto* exp = app.add_subcommand("experiment", "Config-driven recovery experiment");
    std::string e_config, e_trials, e_summary;
    int e_threads = 0;
    exp->add_option("--config", e_config, "experiment JSON")->required();
    exp->add_option("--out-trials", e_trials, "trial CSV path")->required();
    exp->add_option("--out-summary", e_summary, "summary CSV path")->required();
    exp->add_option("--threads", e_threads, "worker thread count");
    exp->callback([&] {
        const ExperimentConfig cfg = load_config(e_config);
        const std::vector<TrialRecord> records = run_experiment(cfg, e_threads);
        write_trials_csv(e_trials, records);
        write_summary_csv(e_summary, summarize(records));
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const BadParameter& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "unexpected failure: " << e.what() << '\n';
        return 3;
    }
    return 0;
}

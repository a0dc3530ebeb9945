#include "csopt/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <utility>

#include <omp.h>

#include "json.hpp"

#include "csopt/errors.hpp"
#include "csopt/kernels.hpp"
#include "csopt/recovery.hpp"
#include "csopt/rng.hpp"

namespace csopt {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw ValidationError("config field '" + field + "': " + what, field);
}

// Shortest round-trip decimal form, for sweep member labels.
std::string format_compact(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::uint64_t as_u64(const json& v, const std::string& field) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
        const auto x = v.get<std::int64_t>();
        if (x < 0) fail(field, "must be nonnegative");
        return static_cast<std::uint64_t>(x);
    }
    fail(field, "must be an integer");
}

std::size_t as_count(const json& v, const std::string& field) {
    return static_cast<std::size_t>(as_u64(v, field));
}

double as_real(const json& v, const std::string& field) {
    if (!v.is_number()) fail(field, "must be a number");
    return v.get<double>();
}

bool as_flag(const json& v, const std::string& field) {
    if (!v.is_boolean()) fail(field, "must be a boolean");
    return v.get<bool>();
}

std::string as_text(const json& v, const std::string& field) {
    if (!v.is_string()) fail(field, "must be a string");
    return v.get<std::string>();
}

void reject_unknown(const json& obj, const std::string& ctx,
                    std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* a : allowed)
            if (it.key() == a) {
                known = true;
                break;
            }
        if (!known) fail(ctx.empty() ? it.key() : ctx + "." + it.key(), "unknown key");
    }
}

void validate_dictionary_spec(const DictionarySpec& s) {
    auto need = [&](bool present, const char* key) {
        if (!present) fail(std::string("dictionary.") + key, "required for kind '" + s.kind + "'");
    };
    auto forbid = [&](bool present, const char* key) {
        if (present) fail(std::string("dictionary.") + key, "not applicable to kind '" + s.kind + "'");
    };
    if (s.n < 1) fail("dictionary.n", "must be at least 1");
    if (s.kind == "gaussian") {
        need(s.big_n.has_value(), "N");
        forbid(s.eps.has_value(), "eps");
        forbid(s.levels.has_value(), "levels");
        forbid(s.latent.has_value(), "latent");
    } else if (s.kind == "perturbed-orth") {
        need(s.eps.has_value(), "eps");
        forbid(s.big_n.has_value(), "N");
        forbid(s.levels.has_value(), "levels");
        forbid(s.latent.has_value(), "latent");
    } else if (s.kind == "dirac-haar") {
        forbid(s.big_n.has_value(), "N");
        forbid(s.eps.has_value(), "eps");
        forbid(s.levels.has_value(), "levels");
        forbid(s.latent.has_value(), "latent");
        forbid(s.seed.has_value(), "seed");
    } else if (s.kind == "swt-sym4") {
        need(s.levels.has_value(), "levels");
        forbid(s.big_n.has_value(), "N");
        forbid(s.eps.has_value(), "eps");
        forbid(s.latent.has_value(), "latent");
        forbid(s.seed.has_value(), "seed");
    } else if (s.kind == "correlated") {
        need(s.big_n.has_value(), "N");
        need(s.latent.has_value(), "latent");
        forbid(s.eps.has_value(), "eps");
        forbid(s.levels.has_value(), "levels");
    } else {
        fail("dictionary.kind", "unknown kind '" + s.kind + "'");
    }
}

DictionarySpec parse_dictionary(const json& obj) {
    if (!obj.is_object()) fail("dictionary", "must be an object");
    reject_unknown(obj, "dictionary", {"kind", "n", "N", "eps", "levels", "latent", "seed"});
    DictionarySpec s;
    if (!obj.contains("kind")) fail("dictionary.kind", "missing");
    s.kind = as_text(obj.at("kind"), "dictionary.kind");
    if (!obj.contains("n")) fail("dictionary.n", "missing");
    s.n = as_count(obj.at("n"), "dictionary.n");
    if (obj.contains("N")) s.big_n = as_count(obj.at("N"), "dictionary.N");
    if (obj.contains("eps")) s.eps = as_real(obj.at("eps"), "dictionary.eps");
    if (obj.contains("levels")) s.levels = as_count(obj.at("levels"), "dictionary.levels");
    if (obj.contains("latent")) s.latent = as_count(obj.at("latent"), "dictionary.latent");
    if (obj.contains("seed")) s.seed = as_u64(obj.at("seed"), "dictionary.seed");
    validate_dictionary_spec(s);
    return s;
}

void check_optimizer_overrides(const OptimizerConfig& cfg, const std::string& ctx) {
    if (cfg.max_iters < 1) fail(ctx + ".max_iters", "must be at least 1");
    if (!(cfg.shrink_alpha > 0.0) || !(cfg.shrink_alpha < 1.0))
        fail(ctx + ".shrink_alpha", "must lie in (0, 1)");
    if (!(cfg.step_alpha > 0.0) || !(cfg.step_alpha <= 1.0))
        fail(ctx + ".step_alpha", "must lie in (0, 1]");
    if (!std::isfinite(cfg.stagnation_tol)) fail(ctx + ".stagnation_tol", "must be finite");
    if (cfg.t.mode == TParam::Mode::fraction) {
        if (!(cfg.t.value > 0.0) || !(cfg.t.value <= 1.0)) fail(ctx + ".t", "fraction must lie in (0, 1]");
    } else if (!(cfg.t.value >= 0.0)) {
        fail(ctx + ".t", "threshold must be nonnegative");
    }
    if (!(cfg.mpa.c0 > 0.0)) fail(ctx + ".c0", "must be positive");
    if (!(cfg.mpa.c_mult > 1.0)) fail(ctx + ".c_mult", "must exceed 1");
    if (!(cfg.mpa.c_max >= cfg.mpa.c0)) fail(ctx + ".c_max", "must be at least c0");
    if (!(cfg.mpa.rank_tol > 0.0)) fail(ctx + ".rank_tol", "must be positive");
}

void parse_algorithm(const json& obj, std::size_t index, std::size_t m,
                     std::vector<AlgorithmSpec>& out) {
    const std::string ctx = "algorithms[" + std::to_string(index) + "]";
    if (!obj.is_object()) fail(ctx, "must be an object");
    reject_unknown(obj, ctx,
                   {"algo", "max_iters", "t", "t_mode", "shrink_alpha", "step_alpha",
                    "step_alpha_sweep", "stagnation_tol", "seed", "normalize_rows", "c0",
                    "c_mult", "c_max", "rank_tol"});
    if (!obj.contains("algo")) fail(ctx + ".algo", "missing");
    const std::string label = as_text(obj.at("algo"), ctx + ".algo");

    OptimizerConfig cfg;
    try {
        cfg.algo = algo_from_label(label);
    } catch (const BadParameter&) {
        fail(ctx + ".algo", "unknown algorithm '" + label + "'");
    }
    cfg.m = m;
    if (obj.contains("max_iters")) cfg.max_iters = as_count(obj.at("max_iters"), ctx + ".max_iters");
    if (obj.contains("t_mode")) {
        const std::string mode = as_text(obj.at("t_mode"), ctx + ".t_mode");
        if (mode == "fraction")
            cfg.t.mode = TParam::Mode::fraction;
        else if (mode == "threshold")
            cfg.t.mode = TParam::Mode::threshold;
        else
            fail(ctx + ".t_mode", "must be 'fraction' or 'threshold'");
    }
    if (obj.contains("t")) cfg.t.value = as_real(obj.at("t"), ctx + ".t");
    if (obj.contains("shrink_alpha")) cfg.shrink_alpha = as_real(obj.at("shrink_alpha"), ctx + ".shrink_alpha");
    if (obj.contains("step_alpha")) cfg.step_alpha = as_real(obj.at("step_alpha"), ctx + ".step_alpha");
    if (obj.contains("stagnation_tol"))
        cfg.stagnation_tol = as_real(obj.at("stagnation_tol"), ctx + ".stagnation_tol");
    if (obj.contains("seed")) cfg.seed = as_u64(obj.at("seed"), ctx + ".seed");
    if (obj.contains("normalize_rows")) cfg.normalize_rows = as_flag(obj.at("normalize_rows"), ctx + ".normalize_rows");
    if (obj.contains("c0")) cfg.mpa.c0 = as_real(obj.at("c0"), ctx + ".c0");
    if (obj.contains("c_mult")) cfg.mpa.c_mult = as_real(obj.at("c_mult"), ctx + ".c_mult");
    if (obj.contains("c_max")) cfg.mpa.c_max = as_real(obj.at("c_max"), ctx + ".c_max");
    if (obj.contains("rank_tol")) cfg.mpa.rank_tol = as_real(obj.at("rank_tol"), ctx + ".rank_tol");

    if (obj.contains("step_alpha_sweep")) {
        if (cfg.algo != Algo::xu && cfg.algo != Algo::rcncm_xu)
            fail(ctx + ".step_alpha_sweep", "only applicable to xu and rcncm-xu");
        if (obj.contains("step_alpha"))
            fail(ctx + ".step_alpha", "cannot combine with step_alpha_sweep");
        const json& arr = obj.at("step_alpha_sweep");
        if (!arr.is_array() || arr.empty()) fail(ctx + ".step_alpha_sweep", "must be a nonempty array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            OptimizerConfig member = cfg;
            member.step_alpha =
                as_real(arr.at(i), ctx + ".step_alpha_sweep[" + std::to_string(i) + "]");
            check_optimizer_overrides(member, ctx);
            out.push_back(AlgorithmSpec{label + "@" + format_compact(member.step_alpha), label, true, member});
        }
        return;
    }

    check_optimizer_overrides(cfg, ctx);
    out.push_back(AlgorithmSpec{label, label, false, cfg});
}

SolverSpec parse_solver(const json& obj, std::size_t index) {
    const std::string ctx = "solvers[" + std::to_string(index) + "]";
    if (!obj.is_object()) fail(ctx, "must be an object");
    reject_unknown(obj, ctx, {"name", "eps", "k_mode"});
    SolverSpec s;
    if (!obj.contains("name")) fail(ctx + ".name", "missing");
    s.name = as_text(obj.at("name"), ctx + ".name");
    if (s.name != "omp" && s.name != "sl0" && s.name != "iht")
        fail(ctx + ".name", "must be 'omp', 'sl0' or 'iht'");
    if (obj.contains("eps")) {
        const double e = as_real(obj.at("eps"), ctx + ".eps");
        if (!(e >= 0.0)) fail(ctx + ".eps", "must be nonnegative");
        s.eps = e;
    }
    if (obj.contains("k_mode")) {
        s.k_mode = as_text(obj.at("k_mode"), ctx + ".k_mode");
        if (s.k_mode != "oracle") fail(ctx + ".k_mode", "only 'oracle' is supported");
    }
    return s;
}

const char kTrialsHeader[] = "algorithm,solver,k,snr_db,trial,mse,success,solver_iters";
const char kSummaryHeader[] = "algorithm,solver,k,mean_mse,success_frac,n_trials";

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

Dictionary build_dictionary(const DictionarySpec& spec) {
    validate_dictionary_spec(spec);
    const std::uint64_t seed = spec.seed.value_or(0);
    if (spec.kind == "gaussian") return gaussian_dictionary(spec.n, *spec.big_n, seed);
    if (spec.kind == "perturbed-orth") return perturbed_orthogonal_dictionary(spec.n, *spec.eps, seed);
    if (spec.kind == "dirac-haar") return dirac_haar_dictionary(spec.n);
    if (spec.kind == "swt-sym4") return undecimated_wavelet_dictionary(spec.n, *spec.levels);
    return correlated_synthetic_dictionary(spec.n, *spec.big_n, *spec.latent, seed);
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(origin + ": " + e.what());
    }
    if (!root.is_object()) fail("", "top level must be a JSON object");
    reject_unknown(root, "",
                   {"dictionary", "m", "algorithms", "solvers", "k_values", "snr_db", "trials",
                    "success_mse", "master_seed"});

    ExperimentConfig cfg;
    if (!root.contains("dictionary")) fail("dictionary", "missing");
    cfg.dictionary = parse_dictionary(root.at("dictionary"));

    if (!root.contains("m")) fail("m", "missing");
    cfg.m = as_count(root.at("m"), "m");
    if (cfg.m < 1) fail("m", "must be at least 1");

    if (!root.contains("algorithms")) fail("algorithms", "missing");
    const json& algos = root.at("algorithms");
    if (!algos.is_array() || algos.empty()) fail("algorithms", "must be a nonempty array");
    for (std::size_t i = 0; i < algos.size(); ++i) parse_algorithm(algos.at(i), i, cfg.m, cfg.algorithms);
    for (std::size_t i = 0; i < cfg.algorithms.size(); ++i)
        for (std::size_t j = i + 1; j < cfg.algorithms.size(); ++j)
            if (cfg.algorithms[i].label == cfg.algorithms[j].label)
                fail("algorithms", "duplicate label '" + cfg.algorithms[i].label + "'");

    if (!root.contains("solvers")) fail("solvers", "missing");
    const json& solvers = root.at("solvers");
    if (!solvers.is_array() || solvers.empty()) fail("solvers", "must be a nonempty array");
    for (std::size_t i = 0; i < solvers.size(); ++i) cfg.solvers.push_back(parse_solver(solvers.at(i), i));
    for (std::size_t i = 0; i < cfg.solvers.size(); ++i)
        for (std::size_t j = i + 1; j < cfg.solvers.size(); ++j)
            if (cfg.solvers[i].name == cfg.solvers[j].name)
                fail("solvers", "duplicate solver '" + cfg.solvers[i].name + "'");

    if (!root.contains("k_values")) fail("k_values", "missing");
    const json& ks = root.at("k_values");
    if (!ks.is_array() || ks.empty()) fail("k_values", "must be a nonempty array");
    for (std::size_t i = 0; i < ks.size(); ++i)
        cfg.k_values.push_back(as_count(ks.at(i), "k_values[" + std::to_string(i) + "]"));

    if (root.contains("snr_db") && !root.at("snr_db").is_null()) {
        const double snr = as_real(root.at("snr_db"), "snr_db");
        if (!std::isfinite(snr)) fail("snr_db", "must be finite or null");
        cfg.snr_db = snr;
    }

    if (!root.contains("trials")) fail("trials", "missing");
    cfg.trials = as_count(root.at("trials"), "trials");
    if (cfg.trials < 1) fail("trials", "must be at least 1");

    if (root.contains("success_mse")) {
        cfg.success_mse = as_real(root.at("success_mse"), "success_mse");
        if (!(cfg.success_mse > 0.0)) fail("success_mse", "must be positive");
    }
    if (root.contains("master_seed")) cfg.master_seed = as_u64(root.at("master_seed"), "master_seed");
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open config: " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_config(buf.str(), path);
}

std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg, int threads) {
    if (cfg.algorithms.empty()) fail("algorithms", "must be a nonempty array");
    if (cfg.solvers.empty()) fail("solvers", "must be a nonempty array");
    if (cfg.k_values.empty()) fail("k_values", "must be a nonempty array");
    if (cfg.trials < 1) fail("trials", "must be at least 1");
    if (!(cfg.success_mse > 0.0)) fail("success_mse", "must be positive");

    const Dictionary d = build_dictionary(cfg.dictionary);
    if (cfg.m < 1 || cfg.m > d.n()) fail("m", "must lie in [1, n]");
    for (std::size_t k : cfg.k_values)
        if (k > d.N()) fail("k_values", "entry exceeds the dictionary size");

    struct Armed {
        std::string label;
        Matrix p;
        Matrix de;
    };
    std::vector<Armed> armed;
    armed.reserve(cfg.algorithms.size());
    for (const AlgorithmSpec& spec : cfg.algorithms) {
        OptimizerConfig oc = spec.cfg;
        oc.m = cfg.m;
        OptimizerResult r;
        try {
            r = optimize(d, oc);
        } catch (const Error& e) {
            throw Error("experiment: optimizer failed for algorithm=" + spec.label + ": " + e.what());
        }
        Matrix de = kernels::matmul(r.p, d.atoms);
        armed.push_back(Armed{spec.label, std::move(r.p), std::move(de)});
    }

    const std::size_t num_a = armed.size();
    const std::size_t num_s = cfg.solvers.size();
    const std::size_t num_k = cfg.k_values.size();
    const std::size_t num_t = cfg.trials;
    const std::size_t total = num_a * num_s * num_k * num_t;

    std::vector<TrialRecord> out(total);
    std::vector<std::string> failures(total);
    std::vector<char> failed(total, 0);
    const double snr_record =
        cfg.snr_db ? *cfg.snr_db : std::numeric_limits<double>::infinity();
    const int nthreads = threads > 0 ? threads : omp_get_max_threads();

#pragma omp parallel for schedule(static) num_threads(nthreads)
    for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(total); ++idx) {
        std::size_t rest = static_cast<std::size_t>(idx);
        const std::size_t ti = rest % num_t;
        rest /= num_t;
        const std::size_t ki = rest % num_k;
        rest /= num_k;
        const std::size_t si = rest % num_s;
        const std::size_t ai = rest / num_s;
        const std::size_t k = cfg.k_values[ki];
        try {
            const std::uint64_t tseed = derive_seed(cfg.master_seed, k, ti);
            const SparseSignal gamma = gen_sparse_signal(d.N(), k, tseed);
            const std::uint64_t noise_seed = splitmix64(tseed ^ 0xA0761D6478BD642Full);
            const Measurement meas = measure(armed[ai].p, d.atoms, gamma, cfg.snr_db, noise_seed);
            const SolverSpec& sv = cfg.solvers[si];
            SolveResult sol;
            if (sv.name == "omp") {
                const double eps = sv.eps ? *sv.eps : (cfg.snr_db ? 1.1 * meas.noise_norm : 1e-9);
                sol = omp_eps(armed[ai].de, meas.y, eps, cfg.m);
            } else if (sv.name == "sl0") {
                Sl0Params params;
                params.eps = sv.eps ? *sv.eps : (cfg.snr_db ? 1.1 * meas.noise_norm : 0.0);
                sol = sl0(armed[ai].de, meas.y, params);
            } else {
                sol = iht(armed[ai].de, meas.y, k);
            }
            const std::vector<double> xhat = reconstruct(d.atoms, sol.gamma);
            const double err = mse(xhat, meas.x);
            out[idx] = TrialRecord{armed[ai].label, sv.name,       k,
                                   snr_record,      ti,            err,
                                   err < cfg.success_mse,          sol.iterations};
        } catch (const std::exception& e) {
            failed[idx] = 1;
            failures[idx] = e.what();
        }
    }

    for (std::size_t idx = 0; idx < total; ++idx) {
        if (!failed[idx]) continue;
        std::size_t rest = idx;
        const std::size_t ti = rest % num_t;
        rest /= num_t;
        const std::size_t ki = rest % num_k;
        rest /= num_k;
        const std::size_t si = rest % num_s;
        const std::size_t ai = rest / num_s;
        throw Error("experiment: trial failed at algorithm=" + armed[ai].label +
                    " solver=" + cfg.solvers[si].name + " k=" + std::to_string(cfg.k_values[ki]) +
                    " trial=" + std::to_string(ti) + ": " + failures[idx]);
    }
    return out;
}

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records) {
    if (records.empty()) throw BadParameter("summarize: no records");

    struct Cell {
        std::string algorithm;
        std::string solver;
        std::size_t k;
        double sum_mse = 0.0;
        std::size_t n = 0;
        std::size_t successes = 0;
    };
    std::vector<Cell> cells;
    std::map<std::string, std::size_t> index;
    for (const TrialRecord& r : records) {
        const std::string key = r.algorithm + '\x1f' + r.solver + '\x1f' + std::to_string(r.k);
        auto it = index.find(key);
        if (it == index.end()) {
            it = index.emplace(key, cells.size()).first;
            cells.push_back(Cell{r.algorithm, r.solver, r.k, 0.0, 0, 0});
        }
        Cell& c = cells[it->second];
        c.sum_mse += r.mse;
        c.n += 1;
        if (r.success) c.successes += 1;
    }

    std::vector<SummaryRow> member_rows;
    member_rows.reserve(cells.size());
    for (const Cell& c : cells)
        member_rows.push_back(SummaryRow{c.algorithm, c.solver, c.k,
                                         c.sum_mse / static_cast<double>(c.n),
                                         static_cast<double>(c.successes) / static_cast<double>(c.n),
                                         c.n});

    // Sweep members are labeled "<family>@<alpha>"; each family gets a
    // best-success aggregate per (solver, k) right after its block of rows.
    std::map<std::string, std::size_t> family_last;
    for (std::size_t i = 0; i < member_rows.size(); ++i) {
        const std::string& label = member_rows[i].algorithm;
        const auto at = label.find('@');
        if (at != std::string::npos && at > 0) family_last[label.substr(0, at)] = i;
    }

    std::vector<SummaryRow> out;
    out.reserve(member_rows.size() + family_last.size() * 4);
    for (std::size_t i = 0; i < member_rows.size(); ++i) {
        out.push_back(member_rows[i]);
        for (const auto& [family, last] : family_last) {
            if (last != i) continue;
            std::vector<std::pair<std::string, std::size_t>> targets;  // (solver, k) order
            for (const SummaryRow& row : member_rows) {
                if (row.algorithm.rfind(family + "@", 0) != 0) continue;
                const auto key = std::make_pair(row.solver, row.k);
                if (std::find(targets.begin(), targets.end(), key) == targets.end())
                    targets.push_back(key);
            }
            for (const auto& [solver, k] : targets) {
                const SummaryRow* best = nullptr;
                for (const SummaryRow& row : member_rows) {
                    if (row.solver != solver || row.k != k) continue;
                    if (row.algorithm.rfind(family + "@", 0) != 0) continue;
                    if (best == nullptr || row.success_frac > best->success_frac) best = &row;
                }
                out.push_back(SummaryRow{family + ":best", solver, k, best->mean_mse,
                                         best->success_frac, best->n_trials});
            }
        }
    }
    return out;
}

void write_trials_csv(const std::string& path, const std::vector<TrialRecord>& records) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << kTrialsHeader << '\n';
    for (const TrialRecord& r : records) {
        f << r.algorithm << ',' << r.solver << ',' << r.k << ',' << format_real(r.snr_db) << ','
          << r.trial << ',' << format_real(r.mse) << ',' << (r.success ? "true" : "false") << ','
          << r.solver_iters << '\n';
    }
    f.flush();
    if (!f) throw IoError("write failed: " + path);
}

void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << kSummaryHeader << '\n';
    for (const SummaryRow& r : rows) {
        f << r.algorithm << ',' << r.solver << ',' << r.k << ',' << format_real(r.mean_mse) << ','
          << format_real(r.success_frac) << ',' << r.n_trials << '\n';
    }
    f.flush();
    if (!f) throw IoError("write failed: " + path);
}

std::vector<TrialRecord> read_trials_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open: " + path);
    std::string line;
    if (!std::getline(f, line)) throw ParseError(path + ": empty file");
    if (line == kTrialsHeader + std::string("\r")) line.pop_back();
    if (line != kTrialsHeader) throw ParseError(path + ": unexpected header '" + line + "'");

    std::vector<TrialRecord> out;
    std::size_t lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> parts = split_fields(line);
        if (parts.size() != 8)
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected 8 fields");
        try {
            TrialRecord r;
            r.algorithm = parts[0];
            r.solver = parts[1];
            r.k = static_cast<std::size_t>(std::stoull(parts[2]));
            r.snr_db = std::stod(parts[3]);
            r.trial = static_cast<std::size_t>(std::stoull(parts[4]));
            r.mse = std::stod(parts[5]);
            if (parts[6] == "true")
                r.success = true;
            else if (parts[6] == "false")
                r.success = false;
            else
                throw ParseError(path + ":" + std::to_string(lineno) + ": bad success flag");
            r.solver_iters = static_cast<std::size_t>(std::stoull(parts[7]));
            out.push_back(std::move(r));
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace csopt

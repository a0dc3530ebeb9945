#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "csopt/dictionaries.hpp"
#include "csopt/errors.hpp"
#include "csopt/harness.hpp"

using namespace csopt;

namespace {

std::string minimal_config() {
    return R"({
        "dictionary": {"kind": "gaussian", "n": 8, "N": 16, "seed": 1},
        "m": 4,
        "algorithms": [{"algo": "random", "seed": 2}],
        "solvers": [{"name": "omp"}],
        "k_values": [1],
        "trials": 2
    })";
}

bool same_record(const TrialRecord& a, const TrialRecord& b) {
    return a.algorithm == b.algorithm && a.solver == b.solver && a.k == b.k &&
           a.snr_db == b.snr_db && a.trial == b.trial && a.mse == b.mse &&
           a.success == b.success && a.solver_iters == b.solver_iters;
}

std::string field_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const ValidationError& e) {
        return e.field;
    }
    return "<no throw>";
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

TrialRecord rec(const std::string& algo, std::size_t k, std::size_t trial, double mse_val,
                bool success) {
    TrialRecord r;
    r.algorithm = algo;
    r.solver = "omp";
    r.k = k;
    r.snr_db = std::numeric_limits<double>::infinity();
    r.trial = trial;
    r.mse = mse_val;
    r.success = success;
    r.solver_iters = k;
    return r;
}

}  // namespace

TEST_CASE("a minimal config parses with all defaults materialized") {
    const ExperimentConfig cfg = parse_config(minimal_config());
    CHECK(cfg.dictionary.kind == "gaussian");
    CHECK(cfg.dictionary.n == 8);
    CHECK(cfg.dictionary.big_n.value() == 16);
    CHECK(cfg.m == 4);
    CHECK(cfg.algorithms.size() == 1);
    CHECK(cfg.algorithms[0].label == "random");
    CHECK(cfg.algorithms[0].family == "random");
    CHECK(!cfg.algorithms[0].swept);
    CHECK(cfg.algorithms[0].cfg.max_iters == 100);
    CHECK(cfg.algorithms[0].cfg.shrink_alpha == 0.9);
    CHECK(cfg.algorithms[0].cfg.step_alpha == 0.5);
    CHECK(cfg.solvers.size() == 1);
    CHECK(cfg.solvers[0].name == "omp");
    CHECK(!cfg.solvers[0].eps.has_value());
    CHECK(cfg.solvers[0].k_mode == "oracle");
    CHECK(cfg.k_values == std::vector<std::size_t>{1});
    CHECK(!cfg.snr_db.has_value());
    CHECK(cfg.trials == 2);
    CHECK(cfg.success_mse == 1e-6);
    CHECK(cfg.master_seed == 0);
}

TEST_CASE("validation errors name the offending field") {
    auto drop_key = [](const std::string& key) {
        std::string text = minimal_config();
        // removing a required line; the trailing comma placement is safe for
        // every key the test uses
        const auto pos = text.find("\"" + key + "\"");
        const auto end = text.find('\n', pos);
        text.erase(pos, end - pos + 1);
        return text;
    };
    CHECK(field_of([&] { parse_config(drop_key("m")); }) == "m");
    std::string no_trials = minimal_config();
    const std::string tline = "\"trials\": 2";
    no_trials.replace(no_trials.find(tline), tline.size(), "\"success_mse\": 1e-6");
    CHECK(field_of([&] { parse_config(no_trials); }) == "trials");
    CHECK_THROWS_AS(parse_config("{\"m\": 4"), ParseError);
}

TEST_CASE("unknown keys are rejected at every level") {
    std::string text = minimal_config();
    text.insert(text.rfind('}'), ", \"bogus\": 1");
    CHECK(field_of([&] { parse_config(text); }) == "bogus");

    std::string inner = minimal_config();
    const auto pos = inner.find("\"seed\": 1");
    inner.insert(pos, "\"shape\": 3, ");
    CHECK(field_of([&] { parse_config(inner); }) == "dictionary.shape");

    std::string algo = minimal_config();
    const auto apos = algo.find("\"seed\": 2");
    algo.insert(apos, "\"speed\": 3, ");
    CHECK(field_of([&] { parse_config(algo); }) == "algorithms[0].speed");
}

TEST_CASE("a null snr entry means noiseless, a number means noisy") {
    std::string text = minimal_config();
    text.insert(text.rfind('}'), ", \"snr_db\": null");
    CHECK(!parse_config(text).snr_db.has_value());

    std::string noisy = minimal_config();
    noisy.insert(noisy.rfind('}'), ", \"snr_db\": 30");
    CHECK(parse_config(noisy).snr_db.value() == 30.0);
}

TEST_CASE("a step size sweep expands into labeled members") {
    std::string text = minimal_config();
    const auto pos = text.find("[{\"algo\": \"random\", \"seed\": 2}]");
    text.replace(pos, std::string("[{\"algo\": \"random\", \"seed\": 2}]").size(),
                 "[{\"algo\": \"xu\", \"step_alpha_sweep\": [0.25, 0.5]}]");
    const ExperimentConfig cfg = parse_config(text);
    REQUIRE(cfg.algorithms.size() == 2);
    CHECK(cfg.algorithms[0].label == "xu@0.25");
    CHECK(cfg.algorithms[1].label == "xu@0.5");
    for (const AlgorithmSpec& a : cfg.algorithms) {
        CHECK(a.family == "xu");
        CHECK(a.swept);
    }
    CHECK(cfg.algorithms[0].cfg.step_alpha == 0.25);
    CHECK(cfg.algorithms[1].cfg.step_alpha == 0.5);
}

TEST_CASE("sweeps are rejected where they make no sense") {
    auto with_algos = [](const std::string& algos) {
        std::string text = minimal_config();
        const std::string old = "[{\"algo\": \"random\", \"seed\": 2}]";
        text.replace(text.find(old), old.size(), algos);
        return text;
    };
    CHECK(field_of([&] {
              parse_config(with_algos("[{\"algo\": \"elad\", \"step_alpha_sweep\": [0.5]}]"));
          }) == "algorithms[0].step_alpha_sweep");
    CHECK(field_of([&] {
              parse_config(with_algos(
                  "[{\"algo\": \"xu\", \"step_alpha\": 0.5, \"step_alpha_sweep\": [0.5]}]"));
          }) == "algorithms[0].step_alpha");
    CHECK(field_of([&] {
              parse_config(with_algos("[{\"algo\": \"elad\"}, {\"algo\": \"elad\"}]"));
          }) == "algorithms");
}

TEST_CASE("solver entries are validated") {
    auto with_solvers = [](const std::string& solvers) {
        std::string text = minimal_config();
        const std::string old = "[{\"name\": \"omp\"}]";
        text.replace(text.find(old), old.size(), solvers);
        return text;
    };
    CHECK(field_of([&] { parse_config(with_solvers("[{\"name\": \"lasso\"}]")); }) ==
          "solvers[0].name");
    CHECK(field_of([&] {
              parse_config(with_solvers("[{\"name\": \"omp\", \"k_mode\": \"given\"}]"));
          }) == "solvers[0].k_mode");
    const ExperimentConfig cfg =
        parse_config(with_solvers("[{\"name\": \"sl0\", \"eps\": 0.001}]"));
    CHECK(cfg.solvers[0].eps.value() == 0.001);
}

TEST_CASE("dictionary specs are matched against their kind") {
    auto with_dict = [](const std::string& dict) {
        std::string text = minimal_config();
        const std::string old = "{\"kind\": \"gaussian\", \"n\": 8, \"N\": 16, \"seed\": 1}";
        text.replace(text.find(old), old.size(), dict);
        return text;
    };
    // missing requirement
    CHECK(field_of([&] { parse_config(with_dict("{\"kind\": \"gaussian\", \"n\": 8}")); }) ==
          "dictionary.N");
    CHECK(field_of([&] {
              parse_config(with_dict("{\"kind\": \"correlated\", \"n\": 8, \"N\": 16, \"seed\": 1}"));
          }) == "dictionary.latent");
    // field from the wrong kind
    CHECK(field_of([&] {
              parse_config(with_dict("{\"kind\": \"dirac-haar\", \"n\": 8, \"seed\": 1}"));
          }) == "dictionary.seed");
    CHECK(field_of([&] {
              parse_config(with_dict("{\"kind\": \"gaussian\", \"n\": 8, \"N\": 16, \"eps\": 0.1}"));
          }) == "dictionary.eps");
    CHECK(field_of([&] {
              parse_config(with_dict("{\"kind\": \"fourier\", \"n\": 8}"));
          }) == "dictionary.kind");
}

TEST_CASE("dictionary construction matches the direct constructors") {
    DictionarySpec spec;
    spec.kind = "gaussian";
    spec.n = 8;
    spec.big_n = 16;
    spec.seed = 3;
    const Dictionary built = build_dictionary(spec);
    const Dictionary direct = gaussian_dictionary(8, 16, 3);
    REQUIRE(built.atoms.rows() == direct.atoms.rows());
    REQUIRE(built.atoms.cols() == direct.atoms.cols());
    for (std::size_t i = 0; i < built.atoms.size(); ++i)
        CHECK(built.atoms.storage()[i] == direct.atoms.storage()[i]);

    DictionarySpec fixed;
    fixed.kind = "dirac-haar";
    fixed.n = 16;
    CHECK(build_dictionary(fixed).N() == 32);
}

TEST_CASE("an experiment on trivial instances succeeds everywhere") {
    std::string text = minimal_config();
    const std::string old = "\"k_values\": [1]";
    text.replace(text.find(old), old.size(), "\"k_values\": [0]");
    const ExperimentConfig cfg = parse_config(text);
    const std::vector<TrialRecord> records = run_experiment(cfg, 1);
    REQUIRE(records.size() == 2);
    for (const TrialRecord& r : records) {
        CHECK(r.mse == 0.0);
        CHECK(r.success);
        CHECK(std::isinf(r.snr_db));
    }
}

TEST_CASE("experiments are reproducible and extend by trial prefix") {
    std::string text = minimal_config();
    const std::string old = "\"k_values\": [1]";
    text.replace(text.find(old), old.size(), "\"k_values\": [1, 2]");
    ExperimentConfig cfg = parse_config(text);
    cfg.trials = 3;
    const std::vector<TrialRecord> a = run_experiment(cfg);
    const std::vector<TrialRecord> b = run_experiment(cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(same_record(a[i], b[i]));

    // more trials only append within each cell; earlier trials are untouched
    cfg.trials = 4;
    const std::vector<TrialRecord> extended = run_experiment(cfg);
    std::vector<TrialRecord> filtered;
    for (const TrialRecord& r : extended)
        if (r.trial < 3) filtered.push_back(r);
    REQUIRE(filtered.size() == a.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(same_record(a[i], filtered[i]));
}

TEST_CASE("thread count never changes the records") {
    ExperimentConfig cfg = parse_config(minimal_config());
    cfg.trials = 4;
    const std::vector<TrialRecord> one = run_experiment(cfg, 1);
    const std::vector<TrialRecord> many = run_experiment(cfg, 3);
    REQUIRE(one.size() == many.size());
    for (std::size_t i = 0; i < one.size(); ++i) CHECK(same_record(one[i], many[i]));
}

TEST_CASE("success is exactly the configured error cutoff") {
    ExperimentConfig cfg = parse_config(minimal_config());
    cfg.trials = 6;
    cfg.k_values = {1, 2, 3};
    const std::vector<TrialRecord> records = run_experiment(cfg);
    for (const TrialRecord& r : records) CHECK(r.success == (r.mse < cfg.success_mse));
}

TEST_CASE("an oversized measurement count is refused") {
    ExperimentConfig cfg = parse_config(minimal_config());
    cfg.m = 9;  // dictionary rows: 8
    CHECK(field_of([&] { run_experiment(cfg); }) == "m");
}

TEST_CASE("summaries average per cell") {
    const std::vector<TrialRecord> records{rec("random", 1, 0, 0.0, true),
                                           rec("random", 1, 1, 2e-6, false)};
    const std::vector<SummaryRow> rows = summarize(records);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].algorithm == "random");
    CHECK(rows[0].mean_mse == doctest::Approx(1e-6).epsilon(1e-12));
    CHECK(rows[0].success_frac == 0.5);
    CHECK(rows[0].n_trials == 2);
}

TEST_CASE("sweep families gain a best row after their members") {
    const std::vector<TrialRecord> records{
        rec("xu@0.25", 2, 0, 1e-3, false), rec("xu@0.25", 2, 1, 0.0, true),
        rec("xu@0.5", 2, 0, 0.0, true),    rec("xu@0.5", 2, 1, 0.0, true),
    };
    const std::vector<SummaryRow> rows = summarize(records);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].algorithm == "xu@0.25");
    CHECK(rows[1].algorithm == "xu@0.5");
    CHECK(rows[2].algorithm == "xu:best");
    CHECK(rows[2].success_frac == 1.0);
    CHECK(rows[2].mean_mse == 0.0);
    CHECK(rows[2].n_trials == 2);
}

TEST_CASE("trial tables survive a write and read cycle unchanged") {
    ExperimentConfig cfg = parse_config(minimal_config());
    cfg.k_values = {1, 2};
    const std::vector<TrialRecord> records = run_experiment(cfg);
    const std::string path = "harness_roundtrip.csv";
    write_trials_csv(path, records);
    const std::vector<TrialRecord> back = read_trials_csv(path);
    REQUIRE(back.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) CHECK(same_record(records[i], back[i]));
    const std::string text = slurp(path);
    CHECK(text.rfind("algorithm,solver,k,snr_db,trial,mse,success,solver_iters\n", 0) == 0);
    CHECK(text.find(",true,") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("an empty trial table writes only the header") {
    const std::string path = "harness_empty.csv";
    write_trials_csv(path, {});
    CHECK(slurp(path) == "algorithm,solver,k,snr_db,trial,mse,success,solver_iters\n");
    CHECK(read_trials_csv(path).empty());
    std::remove(path.c_str());
}

TEST_CASE("summary tables carry their own header") {
    const std::vector<SummaryRow> rows = summarize({rec("random", 1, 0, 0.0, true)});
    const std::string path = "harness_summary.csv";
    write_summary_csv(path, rows);
    const std::string text = slurp(path);
    CHECK(text.rfind("algorithm,solver,k,mean_mse,success_frac,n_trials\n", 0) == 0);
    CHECK(text.find("random,omp,1,") != std::string::npos);
    std::remove(path.c_str());
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "csopt/coherence.hpp"
#include "csopt/dictionaries.hpp"
#include "csopt/errors.hpp"
#include "csopt/matops.hpp"
#include "csopt/recovery.hpp"

using namespace csopt;

namespace {

GramMatrix gram3(double g01, double g02, double g12) {
    Matrix a = Matrix::identity(3);
    a(0, 1) = a(1, 0) = g01;
    a(0, 2) = a(2, 0) = g02;
    a(1, 2) = a(2, 1) = g12;
    return GramMatrix::trusted(std::move(a));
}

}  // namespace

TEST_CASE("mutual_coherence of orthonormal columns is zero") {
    CHECK(mutual_coherence(Matrix::identity(3)) == 0.0);
}

TEST_CASE("mutual_coherence of duplicated columns is one") {
    Matrix a(2, 2);
    a(0, 0) = 2.0;
    a(0, 1) = 2.0;
    CHECK(mutual_coherence(a) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("mutual_coherence enumerates every pair") {
    Matrix a(2, 3);
    a(0, 0) = 1.0;
    a(1, 1) = 1.0;
    a(0, 2) = a(1, 2) = 1.0 / std::sqrt(2.0);
    CHECK(mutual_coherence(a) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("mutual_coherence of a single column is zero") {
    Matrix a(3, 1);
    a(0, 0) = 2.0;
    CHECK(mutual_coherence(a) == 0.0);
}

TEST_CASE("mutual_coherence rejects zero columns") {
    Matrix a(2, 2);
    a(0, 0) = 1.0;
    CHECK_THROWS_AS(mutual_coherence(a), ZeroColumn);
}

TEST_CASE("t_averaged_coherence threshold mode averages the exceeding entries") {
    const GramMatrix g = gram3(0.9, 0.5, 0.1);
    const auto v = t_averaged_coherence(g, TParam::threshold(0.4));
    REQUIRE(v.has_value());
    CHECK(*v == doctest::Approx(0.7).epsilon(1e-14));
}

TEST_CASE("t_averaged_coherence threshold mode is absent on empty selection") {
    const GramMatrix g = gram(Matrix::identity(3));
    CHECK(!t_averaged_coherence(g, TParam::threshold(0.5)).has_value());
}

TEST_CASE("t_averaged_coherence fraction one averages everything") {
    const GramMatrix g = gram3(0.9, 0.5, 0.1);
    const auto v = t_averaged_coherence(g, TParam::fraction(1.0));
    REQUIRE(v.has_value());
    CHECK(*v == doctest::Approx((0.9 + 0.5 + 0.1) / 3.0).epsilon(1e-14));
}

TEST_CASE("t_averaged_coherence top fraction reduces to the coherence") {
    // top 2 of the 6 mirrored off-diagonals = both copies of the max
    const GramMatrix g = gram3(0.9, 0.5, 0.1);
    const auto v = t_averaged_coherence(g, TParam::fraction(1.0 / 3.0));
    REQUIRE(v.has_value());
    CHECK(std::abs(*v - 0.9) <= 1e-12);
}

TEST_CASE("t_averaged_coherence rejects out-of-range parameters") {
    const GramMatrix g = gram(Matrix::identity(3));
    CHECK_THROWS_AS(t_averaged_coherence(g, TParam::fraction(0.0)), BadParameter);
    CHECK_THROWS_AS(t_averaged_coherence(g, TParam::fraction(1.5)), BadParameter);
    CHECK_THROWS_AS(t_averaged_coherence(g, TParam::threshold(-0.1)), BadParameter);
    CHECK_THROWS_AS(t_averaged_coherence(g, TParam::threshold(1.0)), BadParameter);
}

TEST_CASE("welch_bound closed form") {
    CHECK(welch_bound(1, 2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(welch_bound(5, 5) == 0.0);
    CHECK(welch_bound(150, 512) == doctest::Approx(std::sqrt(362.0 / (150.0 * 511.0))).epsilon(1e-15));
    CHECK(welch_bound(150, 512) == doctest::Approx(0.068722).epsilon(1e-4));
    CHECK_THROWS_AS(welch_bound(0, 4), BadParameter);
    CHECK_THROWS_AS(welch_bound(5, 4), BadParameter);
    CHECK_THROWS_AS(welch_bound(1, 1), BadParameter);
}

TEST_CASE("recoverable_sparsity_bound evaluates the closed form") {
    CHECK(recoverable_sparsity_bound(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(recoverable_sparsity_bound(1.0 / 3.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(recoverable_sparsity_bound(0.1) == doctest::Approx(5.5).epsilon(1e-14));
    CHECK_THROWS_AS(recoverable_sparsity_bound(0.0), BadParameter);
    CHECK_THROWS_AS(recoverable_sparsity_bound(-0.5), BadParameter);
}

TEST_CASE("recoverable_sparsity_bound strictly decreases in coherence") {
    double prev = std::numeric_limits<double>::infinity();
    for (double mu = 0.05; mu <= 1.0; mu += 0.05) {
        const double b = recoverable_sparsity_bound(mu);
        CHECK(b < prev);
        prev = b;
    }
}

TEST_CASE("coherence_report fields are mutually consistent") {
    const Dictionary d = gaussian_dictionary(16, 48, 5);
    const CoherenceReport rep = coherence_report(d.atoms, TParam::fraction(0.2));
    CHECK(rep.mu >= rep.welch - 1e-10);
    CHECK(rep.mu <= 1.0 + 1e-12);
    REQUIRE(rep.mu_t.has_value());
    CHECK(*rep.mu_t <= rep.mu + 1e-12);
    CHECK(rep.sparsity_bound == doctest::Approx((1.0 + 1.0 / rep.mu) / 2.0).epsilon(1e-12));
}

TEST_CASE("coherence_report on an orthonormal basis reports an infinite bound") {
    const CoherenceReport rep = coherence_report(Matrix::identity(4), TParam::fraction(0.2));
    CHECK(rep.mu == 0.0);
    CHECK(std::isinf(rep.sparsity_bound));
}

TEST_CASE("sparsity bound certifies exact matching pursuit recovery") {
    // any signal below the coherence bound must come back support-exact
    const Dictionary d = dirac_haar_dictionary(16);
    const double mu = mutual_coherence(d.atoms);
    const double bound = recoverable_sparsity_bound(mu);
    const std::size_t k = static_cast<std::size_t>(std::ceil(bound)) - 1;
    REQUIRE(k >= 1);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const SparseSignal gamma = gen_sparse_signal(d.N(), k, seed);
        const Measurement ms = measure(Matrix::identity(16), d.atoms, gamma, {}, seed);
        const SolveResult sol = omp_eps(d.atoms, ms.y, 1e-9, k);
        REQUIRE(sol.gamma.support == gamma.support);
        for (std::size_t i = 0; i < k; ++i)
            CHECK(std::abs(sol.gamma.coeffs[i] - gamma.coeffs[i]) <= 1e-8);
    }
}

#include "doctest.h"

#include <cmath>
#include <random>

#include "critical.hpp"
#include "errors.hpp"
#include "network.hpp"

using namespace qbrain;

namespace {

NetworkModel matrix_g()
{
    return NetworkModel::from_json(nlohmann::json::parse(R"({
      "n": 6,
      "thresholds": [17, 6, 11, 25, 31, 43],
      "weights": [
        [0,       1e-10,   2e-10,   0.5e-10, 1.5e-10, 5e-10],
        [1e-10,   0,       3e-10,   3e-10,   2e-10,   3.5e-10],
        [2e-10,   3e-10,   0,       1.5e-10, 4e-10,   3e-10],
        [0.5e-10, 3e-10,   1.5e-10, 0,       4.5e-10, 1e-10],
        [1.5e-10, 2e-10,   4e-10,   4.5e-10, 0,       0.5e-10],
        [5e-10,   3.5e-10, 3e-10,   1e-10,   0.5e-10, 0]
      ]
    })"));
}

// random model with a critical split planted by construction: thresholds of
// the gapless modes are set to exactly 2 sum_a W_ja xi_a
struct PlantedModel {
    NetworkModel model;
    std::vector<int> gapless;
    std::vector<double> xi; // aligned with the excited complement
};

PlantedModel plant_critical(std::mt19937& rng, int n, int gapless_count)
{
    std::uniform_real_distribution<double> weight(0.05, 0.5);
    std::uniform_real_distribution<double> level(0.5, 4.0);
    std::vector<double> w(static_cast<std::size_t>(n) * n, 0.0);
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            double v = weight(rng);
            w[static_cast<std::size_t>(j) * n + k] = v;
            w[static_cast<std::size_t>(k) * n + j] = v;
        }
    std::vector<int> modes(n);
    for (int j = 0; j < n; ++j) modes[j] = j;
    std::shuffle(modes.begin(), modes.end(), rng);
    std::vector<int> gapless(modes.begin(), modes.begin() + gapless_count);
    std::sort(gapless.begin(), gapless.end());
    std::vector<int> excited;
    for (int j = 0; j < n; ++j)
        if (std::find(gapless.begin(), gapless.end(), j) == gapless.end()) excited.push_back(j);

    std::vector<double> xi(excited.size());
    for (auto& x : xi) x = level(rng);
    std::vector<double> eps(n, 0.0);
    for (int j : gapless) {
        double s = 0.0;
        for (std::size_t a = 0; a < excited.size(); ++a)
            s += w[static_cast<std::size_t>(j) * n + excited[a]] * xi[a];
        eps[j] = 2.0 * s;
    }
    for (int a : excited) eps[a] = level(rng);
    return {NetworkModel(std::move(eps), std::move(w)), std::move(gapless), std::move(xi)};
}

} // namespace

TEST_SUITE_BEGIN("critical");

TEST_CASE("effective threshold formula")
{
    const double g = 0.01;
    auto m = NetworkModel::uniform(5, g);
    std::vector<double> y(5, 0.0);

    SUBCASE("no excitation returns the bare threshold")
    {
        for (int j = 0; j < 5; ++j) CHECK(effective_threshold(m, y, j) == 1.0);
    }
    SUBCASE("one excited neuron lowers the others to 1 - g y1")
    {
        y[0] = 37.0;
        for (int j = 1; j < 5; ++j)
            CHECK(effective_threshold(m, y, j) == doctest::Approx(1.0 - g * 37.0).epsilon(1e-14));
        // the excited neuron itself keeps its bare threshold (others are 0)
        CHECK(effective_threshold(m, y, 0) == 1.0);
    }
    SUBCASE("threshold hits zero at y1 = 1/g")
    {
        y[0] = 1.0 / g;
        for (int j = 1; j < 5; ++j) CHECK(std::abs(effective_threshold(m, y, j)) < 1e-13);
    }
    CHECK_THROWS_AS(effective_threshold(m, std::vector<double>{1.0}, 0), validation_error);
}

TEST_CASE("generic-matrix golden split")
{
    auto m = matrix_g();
    auto sol = solve_critical_split(m, std::vector<int>{3, 4, 5});

    REQUIRE(sol.xi.size() == 3);
    CHECK(sol.xi[0] == doctest::Approx(1e10).epsilon(1e-10));
    CHECK(sol.xi[1] == doctest::Approx(3e10).epsilon(1e-10));
    CHECK(sol.xi[2] == doctest::Approx(2e10).epsilon(1e-10));
    CHECK(sol.residual <= 1e-6 * 43.0);
    for (double gap : sol.effective_gaps) CHECK(std::abs(gap) <= 1e-9 * 43.0);
    CHECK(sol.degeneracy_dimension == 0);

    // integer cross-check of criticality: weights are integers in units of
    // 5e-11 and xi integers in units of 1e10, so 2 W xi is exact arithmetic
    const long long weights_int[3][3] = {{1, 6, 3}, {3, 4, 8}, {10, 7, 6}}; // 2*W/1e-10
    const long long xi_int[3] = {1, 3, 2};                                  // xi/1e10
    const long long eps_int[3] = {25, 31, 43};
    for (int r = 0; r < 3; ++r) {
        long long sum = 0;
        for (int c = 0; c < 3; ++c) sum += weights_int[r][c] * xi_int[c];
        CHECK(sum == eps_int[r]);
    }

    // integer flag keeps this split (the solution is integral)
    SolveOptions iopts;
    iopts.integer = true;
    auto isol = solve_critical_split(m, std::vector<int>{3, 4, 5}, iopts);
    CHECK(isol.xi[0] == 1e10);

    // excited-set diagnostics are reported alongside
    CHECK(sol.excited_thresholds.size() == 3);
}

TEST_CASE("uniform split: every mode but one gapless")
{
    const double g = 2e-3;
    auto m = NetworkModel::uniform(5, g);
    auto sol = solve_critical_split(m, std::vector<int>{1, 2, 3, 4});
    REQUIRE(sol.excited_modes == std::vector<int>{0});
    CHECK(sol.xi[0] == doctest::Approx(1.0 / g).epsilon(1e-12));
    CHECK(sol.residual < 1e-12);
}

TEST_CASE("split validation and infeasibility")
{
    auto m = NetworkModel::uniform(3, 0.1);
    CHECK_THROWS_AS(solve_critical_split(m, std::vector<int>{0, 1, 2}), validation_error);
    CHECK_THROWS_AS(solve_critical_split(m, std::vector<int>{}), validation_error);
    CHECK_THROWS_AS(solve_critical_split(m, std::vector<int>{0, 0}), validation_error);
    CHECK_THROWS_AS(solve_critical_split(m, std::vector<int>{7}), validation_error);

    // no coupling, no criticality
    NetworkModel uncoupled({1.0, 1.0, 1.0}, std::vector<double>(9, 0.0));
    CHECK_THROWS_AS(solve_critical_split(uncoupled, std::vector<int>{1, 2}), numerical_error);

    // integer rounding that breaks the tolerance is rejected
    auto odd = NetworkModel::uniform(3, 0.3); // xi = 10/3
    SolveOptions iopts;
    iopts.integer = true;
    CHECK_THROWS_AS(solve_critical_split(odd, std::vector<int>{1, 2}, iopts), numerical_error);
}

TEST_CASE("degenerate splits return the minimum-norm nonnegative solution")
{
    const double g = 1e-2;
    auto m = NetworkModel::uniform(4, g);
    // one equation, three unknowns: minimum norm spreads the excitation evenly
    auto sol = solve_critical_split(m, std::vector<int>{0});
    REQUIRE(sol.xi.size() == 3);
    CHECK(sol.degeneracy_dimension == 2);
    for (double x : sol.xi) CHECK(x == doctest::Approx(1.0 / (3.0 * g)).epsilon(1e-6));
    CHECK(sol.residual <= 1e-9);
}

TEST_CASE("split search: counts, order, brute-force cross-check")
{
    const double g = 1e-2;
    auto m = NetworkModel::uniform(4, g);

    auto singles = search_critical_splits(m, 1);
    REQUIRE(singles.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(singles[i].excited_modes == std::vector<int>{static_cast<int>(i)});
        CHECK(singles[i].xi[0] == doctest::Approx(1.0 / g).epsilon(1e-9));
    }

    // brute force: every one of the 2^4 - 2 = 14 proper splits of the uniform
    // model is feasible (the single equation 1 = g sum xi always solves)
    auto all = search_critical_splits(m, 3);
    CHECK(all.size() == 14);
    // ordered by excited-set size first
    for (std::size_t i = 1; i < all.size(); ++i)
        CHECK(all[i - 1].excited_modes.size() <= all[i].excited_modes.size());

    auto mg = matrix_g();
    auto found = search_critical_splits(mg, 3);
    bool has_golden = false;
    for (const auto& sol : found)
        if (sol.excited_modes == std::vector<int>{0, 1, 2}) has_golden = true;
    CHECK(has_golden);

    NetworkModel uncoupled({1.0, 1.0, 1.0}, std::vector<double>(9, 0.0));
    CHECK(search_critical_splits(uncoupled, 2).empty());

    CHECK_THROWS_AS(search_critical_splits(m, 0), validation_error);
    CHECK_THROWS_AS(search_critical_splits(m, 4), validation_error);

    // exhaustive search refuses oversized networks
    auto big = NetworkModel::uniform(25, 1e-3);
    CHECK_THROWS_AS(search_critical_splits(big, 1), capacity_error);
    CHECK_NOTHROW(solve_critical_split(big, [] {
        std::vector<int> gl;
        for (int j = 1; j < 25; ++j) gl.push_back(j);
        return gl;
    }()));
}

TEST_CASE("energy gap of patterns on the gapless set")
{
    const double g = 0.05;
    auto m = NetworkModel::uniform(6, g);
    auto sol = solve_critical_split(m, std::vector<int>{1, 2, 3, 4, 5});

    SUBCASE("uniform pattern d,d,d,d,d costs g/2 d^2 (N-1)(N-2)")
    {
        for (int d : {1, 2, 3}) {
            std::vector<double> y(5, static_cast<double>(d));
            const double expected = g * 0.5 * d * d * 20.0;
            CHECK(gap_between(m, sol, y) == doctest::Approx(expected).epsilon(1e-15));
        }
    }
    SUBCASE("reference pattern costs nothing")
    {
        CHECK(gap_between(m, sol, std::vector<double>(5, 0.0)) == 0.0);
    }
    SUBCASE("gap equals the diagonal energy difference of composite states")
    {
        std::mt19937 rng(77);
        std::uniform_int_distribution<int> occ(0, 3);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> y(5);
            for (auto& v : y) v = occ(rng);
            std::vector<double> composite(6, 0.0);
            composite[0] = sol.xi[0];
            for (int j = 0; j < 5; ++j) composite[1 + j] = y[j];
            std::vector<double> reference(6, 0.0);
            reference[0] = sol.xi[0];
            const double diff = std::abs(energy_of_number_state(m, composite) -
                                         energy_of_number_state(m, reference));
            CHECK(gap_between(m, sol, y) == doctest::Approx(diff).epsilon(1e-9));
        }
    }
    SUBCASE("bundled generic matrix: gap of (1,1,1) on modes 4..6")
    {
        auto mg = matrix_g();
        auto gsol = solve_critical_split(mg, std::vector<int>{3, 4, 5});
        const double gap = gap_between(mg, gsol, std::vector<double>{1, 1, 1});
        CHECK(std::abs(gap / 1.2e-9 - 1.0) < 1e-12); // W45 + W46 + W56 doubled
    }
    CHECK_THROWS_AS(gap_between(m, sol, std::vector<double>{1.0}), validation_error);
}

TEST_CASE("pattern counts as exact big integers")
{
    CHECK(pattern_count(5, 1).to_string() == "32");
    CHECK(pattern_count(1, 0).to_string() == "1");
    CHECK(pattern_count(3, 9).to_string() == "1000");

    // brute-force enumeration of binary tuples
    std::uint64_t brute = 0;
    for (int bits = 0; bits < (1 << 5); ++bits) ++brute, (void)bits;
    CHECK(pattern_count(5, 1).as_u64() == brute);

    // the weak-coupling regime packs more than N^(N-1) patterns: d = N
    const int n = 6;
    BigUint lhs = pattern_count(n - 1, n);       // (N+1)^(N-1)
    BigUint rhs = BigUint::pow(n, n - 1);        // N^(N-1)
    CHECK(rhs < lhs);

    // far beyond 64 bits: (10^3)^40 = 10^120
    BigUint huge = pattern_count(40, 999);
    std::string s = huge.to_string();
    CHECK(s.size() == 121);
    CHECK(s[0] == '1');
    CHECK(s.find_first_not_of('0', 1) == std::string::npos);
    CHECK_FALSE(huge.fits_u64());

    CHECK_THROWS_AS(pattern_count(0, 1), validation_error);
    CHECK_THROWS_AS(pattern_count(2, -1), validation_error);
}

TEST_CASE("pattern enumeration within a gap budget")
{
    SUBCASE("weak coupling: every pattern fits the unit budget")
    {
        auto m = NetworkModel::uniform(6, 1e-4);
        auto sol = solve_critical_split(m, std::vector<int>{1, 2, 3, 4, 5});
        auto lib = enumerate_patterns(m, sol, 1, 1.0);
        CHECK(lib.count == 32);
    }
    SUBCASE("strong coupling: only single excitations fit")
    {
        auto m = NetworkModel::uniform(6, 0.2);
        auto sol = solve_critical_split(m, std::vector<int>{1, 2, 3, 4, 5});
        auto lib = enumerate_patterns(m, sol, 1, 1e-3);
        CHECK(lib.count == 6);

        // brute force over all 32 binary patterns
        std::uint64_t brute = 0;
        for (int bits = 0; bits < 32; ++bits) {
            std::vector<double> y(5);
            for (int j = 0; j < 5; ++j) y[j] = (bits >> j) & 1;
            double gap = 0.0;
            for (int j = 0; j < 5; ++j)
                for (int k = 0; k < 5; ++k) gap += m.weight(1 + j, 1 + k) * y[j] * y[k];
            if (gap <= 1e-3) ++brute;
        }
        CHECK(lib.count == brute);
    }
    SUBCASE("zero budget admits exactly the patterns with zero interaction energy")
    {
        // single gapless excitations cost nothing (the pairwise sum has no
        // self terms), so they fit any budget: 1 + m*d patterns at budget 0
        auto m = NetworkModel::uniform(6, 0.2);
        auto sol = solve_critical_split(m, std::vector<int>{1, 2, 3, 4, 5});
        auto lib = enumerate_patterns(m, sol, 2, 0.0);
        CHECK(lib.count == 1 + 5 * 2);
        std::uint64_t brute = 0;
        std::vector<int> y(5, 0);
        while (true) {
            double gap = 0.0;
            for (int j = 0; j < 5; ++j)
                for (int k = 0; k < 5; ++k) gap += m.weight(1 + j, 1 + k) * y[j] * y[k];
            if (gap <= 0.0) ++brute;
            int pos = 4;
            while (pos >= 0 && y[pos] == 2) y[pos--] = 0;
            if (pos < 0) break;
            ++y[pos];
        }
        CHECK(lib.count == brute);
    }
    SUBCASE("count is non-decreasing in the budget and as g decreases")
    {
        std::uint64_t prev = 0;
        auto m = NetworkModel::uniform(6, 0.2);
        auto sol = solve_critical_split(m, std::vector<int>{1, 2, 3, 4, 5});
        for (double budget : {0.0, 1e-3, 0.05, 0.4, 2.0, 10.0}) {
            auto lib = enumerate_patterns(m, sol, 2, budget);
            CHECK(lib.count >= prev);
            prev = lib.count;
        }
        prev = 0;
        for (double g : {0.5, 0.1, 0.02, 1e-3}) {
            auto mg = NetworkModel::uniform(6, g);
            auto sg = solve_critical_split(mg, std::vector<int>{1, 2, 3, 4, 5});
            auto lib = enumerate_patterns(mg, sg, 2, 0.5);
            CHECK(lib.count >= prev);
            prev = lib.count;
        }
    }
    SUBCASE("collected patterns all satisfy the budget and caps")
    {
        auto m = NetworkModel::uniform(5, 0.1);
        auto sol = solve_critical_split(m, std::vector<int>{1, 2, 3, 4});
        EnumerateOptions opts;
        opts.collect = true;
        auto lib = enumerate_patterns(m, sol, 2, 0.6, opts);
        CHECK(lib.patterns.size() == lib.count);
        for (const auto& p : lib.patterns) {
            for (int v : p) {
                CHECK(v >= 0);
                CHECK(v <= 2);
            }
            CHECK(gap_between(m, sol, p) <= 0.6);
        }
    }
    SUBCASE("eager limit raises a capacity error; the stream still works")
    {
        auto m = NetworkModel::uniform(6, 1e-4);
        auto sol = solve_critical_split(m, std::vector<int>{1, 2, 3, 4, 5});
        EnumerateOptions opts;
        opts.limit = 10;
        CHECK_THROWS_AS(enumerate_patterns(m, sol, 1, 1.0, opts), capacity_error);

        PatternStream stream(m, sol, 1, 1.0);
        std::uint64_t streamed = 0;
        std::vector<int> p;
        while (stream.next(p)) ++streamed;
        CHECK(streamed == 32);
    }
}

TEST_CASE("enumeration agrees with brute force on randomized planted models")
{
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> budget_pick(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 4 + static_cast<int>(rng() % 3); // 4..6 modes
        const int m_gapless = std::min(2 + static_cast<int>(rng() % 3), n - 1);
        const int d = 1 + static_cast<int>(rng() % 3); // 1..3
        auto planted = plant_critical(rng, n, m_gapless);
        auto sol = solve_critical_split(planted.model, planted.gapless);

        // budget somewhere between 0 and slightly above the worst case
        double worst = 0.0;
        for (int j : sol.gapless_modes)
            for (int k : sol.gapless_modes) worst += planted.model.weight(j, k);
        worst *= d * d;
        const double budget = budget_pick(rng) * worst * 1.2;

        auto lib = enumerate_patterns(planted.model, sol, d, budget);

        // independent mixed-radix brute force
        std::uint64_t brute = 0;
        std::vector<int> y(sol.gapless_modes.size(), 0);
        while (true) {
            double gap = 0.0;
            for (std::size_t j = 0; j < y.size(); ++j)
                for (std::size_t k = 0; k < y.size(); ++k)
                    gap += planted.model.weight(sol.gapless_modes[j], sol.gapless_modes[k]) *
                           y[j] * y[k];
            if (gap <= budget) ++brute;
            int pos = static_cast<int>(y.size()) - 1;
            while (pos >= 0 && y[pos] == d) y[pos--] = 0;
            if (pos < 0) break;
            ++y[pos];
        }
        CHECK(lib.count == brute);
    }
}

TEST_CASE("scaling estimators")
{
    CHECK(entropy_estimate(1e-4) == doctest::Approx(100.0).epsilon(1e-14));
    CHECK(decoherence_bound(1e-6, 10) == doctest::Approx(1e4).epsilon(1e-12));
    CHECK(thermalization_time(1e-3, 2.0) == doctest::Approx(5e5).epsilon(1e-12));

    // thermalization carries an extra 1/g relative to the decoherence bound
    const double g = 1e-3;
    const int n = 10;
    const double temperature = 100.0; // with n^2 T fixed the ratio is 1/g
    const double ratio = thermalization_time(g, temperature) / decoherence_bound(g, n);
    CHECK(ratio == doctest::Approx(n * n / (g * temperature)).epsilon(1e-12));
    CHECK(ratio == doctest::Approx(1e3).epsilon(1e-12));

    CHECK_THROWS_AS(entropy_estimate(0.0), validation_error);
    CHECK_THROWS_AS(decoherence_bound(1e-3, 1), validation_error);
    CHECK_THROWS_AS(thermalization_time(1e-3, 0.0), validation_error);
}

TEST_SUITE_END();

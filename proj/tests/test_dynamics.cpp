#include "doctest.h"

#include <cmath>
#include <random>

#include "dynamics.hpp"
#include "errors.hpp"
#include "network.hpp"

using namespace qbrain;

namespace {

std::vector<double> linspace(double t_max, int samples)
{
    std::vector<double> t(samples);
    for (int i = 0; i < samples; ++i) t[i] = t_max * i / (samples - 1);
    return t;
}

// 2x2 single-excitation channel with gap delta on the output side and
// coupling q/2: returns |amplitude|^2 transferred from input to output at t.
double two_level_transfer(double delta, double q, double t)
{
    const double coupling = q / 2.0;
    const double omega = std::sqrt(0.25 * delta * delta + coupling * coupling);
    const double s = std::sin(omega * t);
    return coupling * coupling / (omega * omega) * s * s;
}

} // namespace

TEST_SUITE_BEGIN("dynamics");

TEST_CASE("analytic critical response")
{
    std::vector<double> x = {0.0, 4.0, 1.0};
    const double q = 0.2;

    auto t0 = analytic_response_critical(x, q, 0.0);
    for (double v : t0) CHECK(v == 0.0);

    // at t = pi/q the output copies the input exactly
    auto copy = analytic_response_critical(x, q, M_PI / q);
    for (std::size_t j = 0; j < x.size(); ++j)
        CHECK(copy[j] == doctest::Approx(x[j]).epsilon(1e-14));

    // half period: sin^2 = 1/2
    auto half = analytic_response_critical(x, q, M_PI / (2.0 * q));
    CHECK(half[1] == doctest::Approx(2.0).epsilon(1e-13));

    CHECK_THROWS_AS(analytic_response_critical(x, 0.0, 1.0), validation_error);
}

TEST_CASE("analytic ground response against the 2x2 eigen-oracle")
{
    std::vector<double> x = {1.0};
    const double q = 0.1;

    auto t0 = analytic_response_ground(x, q, 0.0);
    CHECK(t0[0] == 0.0);

    // peak fraction from the closed form
    const double t_peak = M_PI / std::sqrt(1.0 + q * q);
    auto peak = analytic_response_ground(x, q, t_peak);
    CHECK(peak[0] == doctest::Approx(q * q / (1.0 + q * q)).epsilon(1e-12));
    CHECK(peak[0] == doctest::Approx(0.00990099).epsilon(1e-6));

    // independent oracle: exact 2x2 evolution with unit gap, fine time scan
    double oracle_peak = 0.0;
    for (int i = 0; i <= 20000; ++i) {
        double t = 8.0 * i / 20000.0;
        oracle_peak = std::max(oracle_peak, two_level_transfer(1.0, q, t));
        CHECK(std::abs(analytic_response_ground(x, q, t)[0] - two_level_transfer(1.0, q, t)) <
              1e-14);
    }
    CHECK(peak[0] == doctest::Approx(oracle_peak).epsilon(1e-6));

    // large coupling: the gap becomes negligible and the peak approaches 1
    const double big_q = 200.0;
    const double big_peak = big_q * big_q / (1.0 + big_q * big_q);
    CHECK(big_peak > 0.999);
}

TEST_CASE("recall fidelity")
{
    std::vector<double> x = {0.0, 1.0, 2.0};
    CHECK(recall_fidelity(x, x) == doctest::Approx(1.0).epsilon(1e-14));
    std::vector<double> scaled = {0.7, 0.3 * 1.0, 0.3 * 2.0};
    // scale invariance over the stimulated modes (mode 0 is unstimulated)
    CHECK(recall_fidelity(scaled, x) == doctest::Approx(1.0).epsilon(1e-14));
    std::vector<double> orthogonal = {5.0, 0.0, 0.0};
    CHECK(recall_fidelity(orthogonal, x) == 0.0);
    CHECK_THROWS_AS(recall_fidelity(x, std::vector<double>{0.0, 0.0, 0.0}), validation_error);
    CHECK_THROWS_AS(recall_fidelity(std::vector<double>{1.0}, x), validation_error);
}

TEST_CASE("exact engine: decoupled layers stay constant at q = 0")
{
    auto m = NetworkModel::uniform(2, 1e-3);
    m.set_input_layer(0.0, 0.0);
    auto basis = build_basis(4, {1, 1, 8, 6});
    std::vector<cplx> alphas = {0.0, 0.0, std::sqrt(0.4), std::sqrt(0.2)};
    auto prep = coherent_state(basis, alphas);
    auto result = evolve_exact(m, prep.state, linspace(5.0, 6));
    for (std::size_t i = 0; i < result.times.size(); ++i) {
        CHECK(std::abs(result.y_expect[i][0]) < 1e-12);
        CHECK(std::abs(result.x_expect[i][0] - result.x_expect[0][0]) < 1e-11);
        CHECK(std::abs(result.x_expect[i][1] - result.x_expect[0][1]) < 1e-11);
    }
}

TEST_CASE("exact engine matches the critical response formula on a reduced model")
{
    const double g = 1e-3, q = 0.1;
    auto m = NetworkModel::uniform(3, g);
    auto reduced = frozen_reduction(m, {{0, 1.0 / g}});
    reduced.set_input_layer(q, 0.0);

    const double x_mean = 0.2;
    auto basis = build_basis(4, {6, 6, 6, 6});
    std::vector<cplx> alphas = {0.0, 0.0, std::sqrt(x_mean), std::sqrt(x_mean)};
    auto prep = coherent_state(basis, alphas);

    auto times = linspace(M_PI / q, 48);
    auto result = evolve_exact(reduced, prep.state, times);

    std::vector<double> stimulus = {x_mean, x_mean};
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        auto expected = analytic_response_critical(stimulus, q, times[i]);
        for (int j = 0; j < 2; ++j)
            worst = std::max(worst, std::abs(result.y_expect[i][j] - expected[j]) / x_mean);
    }
    CHECK(worst < 1e-3);

    // recall is essentially perfect at t = pi/q
    std::vector<double> final_y = result.y_expect.back();
    CHECK(recall_fidelity(final_y, stimulus) > 0.999);
    CHECK(final_y[0] == doctest::Approx(x_mean).epsilon(2e-3));
}

TEST_CASE("exact engine accepts number-state inputs: one quantum Rabi-cycles")
{
    // single gapless channel, one input quantum: |y=0,x=1> -> sin^2(q t / 2)
    const double g = 1e-3, q = 0.2;
    auto reduced = frozen_reduction(NetworkModel::uniform(2, g), {{0, 1.0 / g}});
    reduced.set_input_layer(q, 0.0);
    auto basis = build_basis(2, {1, 1});
    std::vector<cplx> amps(basis->size(), 0.0);
    amps[basis->index_of(std::vector<int>{0, 1})] = 1.0;
    QuantumState one_quantum(basis, amps);

    auto times = linspace(2.0 * M_PI / q, 21);
    auto result = evolve_exact(reduced, one_quantum, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double expected = std::pow(std::sin(0.5 * q * times[i]), 2);
        CHECK(result.y_expect[i][0] == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("exact engine: ground response is q^2 suppressed")
{
    const double g = 1e-3, q = 0.1;
    auto m = NetworkModel::uniform(2, g);
    m.set_input_layer(q, 0.0);

    const double x_mean = 0.3;
    auto basis = build_basis(4, {7, 0, 7, 0});
    std::vector<cplx> alphas = {0.0, 0.0, std::sqrt(x_mean), 0.0};
    auto prep = coherent_state(basis, alphas);

    const double period = 2.0 * M_PI / std::sqrt(1.0 + q * q);
    auto result = evolve_exact(m, prep.state, linspace(period, 64));

    double peak = 0.0;
    for (const auto& y : result.y_expect) peak = std::max(peak, y[0]);
    const double expected = x_mean * q * q / (1.0 + q * q);
    CHECK(peak == doctest::Approx(expected).epsilon(0.05));
    CHECK(peak < 1.05 * expected);
}

TEST_CASE("exact engine conserves norm, energy and per-channel totals")
{
    const double g = 5e-3, q = 0.1;
    auto m = NetworkModel::uniform(2, g);
    m.set_input_layer(q, 0.0);
    auto basis = build_basis(4, {8, 8, 8, 8});
    std::vector<cplx> alphas = {cplx(0.3, 0.1), 0.0, std::sqrt(0.4), cplx(0.0, 0.5)};
    auto prep = coherent_state(basis, alphas);

    auto times = linspace(3.0 * M_PI / q, 40);
    auto result = evolve_exact(m, prep.state, times);

    const double e0 = result.energy_expect.front();
    std::vector<double> chan0(times.size()), chan1(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        chan0[i] = result.y_expect[i][0] + result.x_expect[i][0];
        chan1[i] = result.y_expect[i][1] + result.x_expect[i][1];
        const double unit = std::max(times[i], 1.0);
        CHECK(result.norm_drift[i] <= 1e-10 * unit);
        CHECK(std::abs(result.energy_expect[i] - e0) <= 1e-10 * unit);
        CHECK(std::abs(chan0[i] - chan0[0]) <= 1e-10 * unit);
        CHECK(std::abs(chan1[i] - chan1[0]) <= 1e-10 * unit);
        for (double y : result.y_expect[i]) CHECK(y >= -1e-10);
    }
}

TEST_CASE("exact engine input validation")
{
    auto m = NetworkModel::uniform(2, 1e-3); // no input layer
    auto basis = build_basis(4, {2, 2, 2, 2});
    std::vector<cplx> amps(basis->size(), 0.0);
    amps[0] = 1.0;
    QuantumState state(basis, amps);
    CHECK_THROWS_AS(evolve_exact(m, state, linspace(1.0, 4)), validation_error);

    m.set_input_layer(0.1, 0.0);
    auto wrong = build_basis(2, {2, 2});
    std::vector<cplx> wamps(wrong->size(), 0.0);
    wamps[0] = 1.0;
    CHECK_THROWS_AS(evolve_exact(m, QuantumState(wrong, wamps), linspace(1.0, 4)),
                    validation_error);

    std::vector<cplx> unnormalized(basis->size(), 0.0);
    unnormalized[0] = 0.5;
    CHECK_THROWS_AS(evolve_exact(m, QuantumState(basis, unnormalized), linspace(1.0, 4)),
                    validation_error);

    // the stimulus tail must fit the caps at construction
    auto small = build_basis(4, {2, 2, 2, 2});
    CHECK_THROWS_AS(coherent_state(small, std::vector<cplx>{0.0, 0.0, 1.5, 0.0}),
                    validation_error);
}

TEST_CASE("mean-field engine matches the critical response with a directly represented condensate")
{
    const double g = 1e-3, q = 0.05;
    auto m = NetworkModel::uniform(3, g);
    m.set_input_layer(q, 0.0);

    CoherentConfig config;
    config.a = {std::sqrt(1.0 / g), 0.0, 0.0};
    const double x_mean = 0.3;
    config.b = {0.0, std::sqrt(x_mean), std::sqrt(x_mean)};

    auto times = linspace(M_PI / q, 64);
    auto result = evolve_meanfield(m, config, times);

    std::vector<double> stimulus = {x_mean, x_mean};
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        auto expected = analytic_response_critical(stimulus, q, times[i]);
        for (int j = 0; j < 2; ++j)
            worst = std::max(worst,
                             std::abs(result.y_expect[i][j + 1] - expected[j]) / x_mean);
    }
    CHECK(worst < 1e-3);

    // the condensate stays near 1/g (feedback is O(q^2 / g))
    for (const auto& y : result.y_expect)
        CHECK(std::abs(y[0] - 1.0 / g) / (1.0 / g) < 5e-3);
}

TEST_CASE("mean-field engine: free evolution changes only phases")
{
    NetworkModel m({1.0, 2.0}, std::vector<double>(4, 0.0)); // W = 0, no layer
    CoherentConfig config;
    config.a = {cplx(0.6, 0.2), cplx(0.0, 1.1)};
    auto result = evolve_meanfield(m, config, linspace(7.0, 15));
    for (const auto& y : result.y_expect) {
        CHECK(y[0] == doctest::Approx(std::norm(config.a[0])).epsilon(1e-6));
        CHECK(y[1] == doctest::Approx(std::norm(config.a[1])).epsilon(1e-6));
    }
}

TEST_CASE("engines agree in the small-occupation regime")
{
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> pick(0.0, 1.0);
    for (int trial = 0; trial < 2; ++trial) {
        const double g = 1e-3 * (0.5 + pick(rng));
        const double q = 0.05 + 0.05 * pick(rng);
        auto m = NetworkModel::uniform(2, g);
        m.set_input_layer(q, 0.0);

        CoherentConfig config;
        config.a = {cplx(0.2 * pick(rng), 0.1 * pick(rng)), cplx(0.15 * pick(rng), 0.0)};
        config.b = {std::sqrt(0.08 * pick(rng) + 0.005), std::sqrt(0.05 * pick(rng) + 0.005)};

        auto basis = build_basis(4, {7, 7, 7, 7});
        std::vector<cplx> alphas = {config.a[0], config.a[1], config.b[0], config.b[1]};
        auto prep = coherent_state(basis, alphas);

        auto times = linspace(2.0 * M_PI, 32);
        auto exact = evolve_exact(m, prep.state, times);
        auto mean = evolve_meanfield(m, config, times);

        for (int j = 0; j < 2; ++j) {
            double peak = 0.0, worst = 0.0;
            for (std::size_t i = 0; i < times.size(); ++i)
                peak = std::max(peak, exact.y_expect[i][j]);
            for (std::size_t i = 0; i < times.size(); ++i)
                worst = std::max(worst, std::abs(exact.y_expect[i][j] - mean.y_expect[i][j]));
            CHECK(worst <= 0.05 * std::max(peak, 1e-6));
        }
    }
}

TEST_CASE("mean-field step halving shows 4th-order convergence")
{
    const double g = 0.01, q = 0.3;
    auto m = NetworkModel::uniform(2, g);
    m.set_input_layer(q, 0.0);
    CoherentConfig config;
    config.a = {cplx(1.0, 0.0), cplx(0.5, 0.5)};
    config.b = {cplx(0.8, 0.0), cplx(0.0, 0.6)};

    std::vector<double> times = {8.0};
    const double h = 0.25;
    auto coarse = evolve_meanfield_fixed_step(m, config, times, h);
    auto medium = evolve_meanfield_fixed_step(m, config, times, h / 2.0);
    auto fine = evolve_meanfield_fixed_step(m, config, times, h / 4.0);

    // Richardson differences of the final complex amplitudes; the phase error
    // carries the leading h^4 term (occupations alone see mostly h^5)
    double e1 = 0.0, e2 = 0.0;
    for (int j = 0; j < 2; ++j) {
        e1 += std::abs(coarse.final_config.a[j] - medium.final_config.a[j]);
        e1 += std::abs(coarse.final_config.b[j] - medium.final_config.b[j]);
        e2 += std::abs(medium.final_config.a[j] - fine.final_config.a[j]);
        e2 += std::abs(medium.final_config.b[j] - fine.final_config.b[j]);
    }
    CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.25));
}

TEST_CASE("mean-field drift control and stiff abort")
{
    auto m = NetworkModel::uniform(2, 1e-3);
    m.set_input_layer(0.1, 0.0);
    CoherentConfig config;
    config.a = {cplx(2.0, 0.0), 0.0};
    config.b = {0.0, cplx(1.0, 0.0)};
    auto result = evolve_meanfield(m, config, linspace(30.0, 16));
    for (std::size_t i = 0; i < result.times.size(); ++i)
        CHECK(result.norm_drift[i] <= 1e-8 * std::max(result.times[i], 1.0));

    // absurd frequencies exhaust the halving budget
    NetworkModel stiff({1e15, 1e15}, std::vector<double>(4, 0.0), /*reduced=*/true);
    stiff.set_input_layer(0.1, 0.0);
    MeanFieldOptions opts;
    opts.max_halvings = 6;
    CHECK_THROWS_AS(evolve_meanfield(stiff, config, std::vector<double>{0.5}, opts),
                    numerical_error);
}

TEST_CASE("mean-field input validation")
{
    auto m = NetworkModel::uniform(2, 1e-3);
    CoherentConfig config;
    config.a = {1.0, 0.0};
    config.b = {1.0, 0.0}; // model has no input layer
    CHECK_THROWS_AS(evolve_meanfield(m, config, std::vector<double>{1.0}), validation_error);
    config.b.clear();
    CHECK_NOTHROW(evolve_meanfield(m, config, std::vector<double>{1.0}));
    config.a = {1.0};
    CHECK_THROWS_AS(evolve_meanfield(m, config, std::vector<double>{1.0}), validation_error);
}

TEST_SUITE_END();

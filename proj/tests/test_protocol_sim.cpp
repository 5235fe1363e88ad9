#include <doctest.h>

#include <random>

#include "discord_scope/errors.hpp"
#include "discord_scope/protocol_sim.hpp"
#include "support.hpp"

using namespace dscope;

namespace {

InterferometerConfig tilted() {
    InterferometerConfig c;
    c.a_bs.mix_angle = 0.9;
    c.b_bs.mix_angle = 1.3;
    c.phi_a = 0.4;
    return c;
}

}  // namespace

TEST_CASE("outcome tables") {
    SeparableStateSpec pure{{{1.0, test::up(), test::up()}}};
    const std::vector<OutcomeTable> t = outcome_distribution(pure, InterferometerConfig{}, 0.7);
    REQUIRE(t.size() == 1);
    CHECK(std::abs(t[0][0] - 0.5) < 1e-15);
    CHECK(std::abs(t[0][1]) < 1e-15);
    CHECK(std::abs(t[0][2] - 0.5) < 1e-15);
    CHECK(std::abs(t[0][3]) < 1e-15);

    std::mt19937_64 gen(61);
    std::uniform_real_distribution<double> u(0.0, kTwoPi);
    for (int k = 0; k < 50; ++k) {
        const SeparableStateSpec s = test::random_spec(gen);
        InterferometerConfig c;
        c.a_bs = {u(gen), u(gen), u(gen)};
        c.b_bs = {u(gen), u(gen), u(gen)};
        c.phi_a = u(gen);
        c.phi_b = u(gen);
        const double phi_d = u(gen);
        const std::vector<OutcomeTable> tables = outcome_distribution(s, c, phi_d);
        double mixed = 0.0;
        for (std::size_t v = 0; v < tables.size(); ++v) {
            double sum = 0.0;
            for (double p : tables[v]) {
                CHECK(p >= 0.0);
                sum += p;
            }
            CHECK(std::abs(sum - 1.0) < 1e-12);
            const SeparableStateSpec single{{{1.0, s.components[v].a, s.components[v].b}}};
            CHECK(std::abs(tables[v][0] - correlation_full(single, c, phi_d)) < 1e-14);
            mixed += s.components[v].weight * tables[v][0];
        }
        CHECK(std::abs(mixed - correlation_full(s, c, phi_d)) < 1e-14);
    }
}

TEST_CASE("shot sampling is deterministic and partition independent") {
    const SeparableStateSpec s = test::three_state(kPi / 3);
    const ShotBatch a = sample_shots(s, tilted(), 0.3, 300001, 7);
    const ShotBatch b = sample_shots(s, tilted(), 0.3, 300001, 7);
    const ShotBatch c = sample_shots(s, tilted(), 0.3, 300001, 7, 5);
    CHECK(a.counts == b.counts);
    CHECK(a.counts == c.counts);
    CHECK(a.counts[0] + a.counts[1] + a.counts[2] + a.counts[3] == 300001);
    CHECK(sample_shots(s, tilted(), 0.3, 300001, 8).counts != a.counts);

    // Single pure component with B certain to hit D1.
    SeparableStateSpec pure{{{1.0, test::up(), test::up()}}};
    const ShotBatch p = sample_shots(pure, InterferometerConfig{}, 0.0, 10000, 3);
    CHECK(p.counts[1] == 0);
    CHECK(p.counts[3] == 0);

    CHECK(split_seed(1, 0) != split_seed(1, 1));
    CHECK(split_seed(1, 0) != split_seed(2, 0));
}

TEST_CASE("coincidence estimate lies in the binomial band") {
    const SeparableStateSpec s = test::up_plus();
    const double k_exact = correlation_full(s, tilted(), 1.1);
    const std::uint64_t n = 1000000;
    const double sigma = std::sqrt(k_exact * (1 - k_exact) / double(n));
    int inside = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const ShotBatch b = sample_shots(s, tilted(), 1.1, n, seed, 4);
        if (std::abs(estimate_K(b) - k_exact) <= 4 * sigma) ++inside;
    }
    CHECK(inside >= 95);
}

TEST_CASE("noiseless fringe fit is exact") {
    std::mt19937_64 gen(62);
    for (int k = 0; k < 20; ++k) {
        const SeparableStateSpec s = test::random_spec(gen);
        InterferometerConfig c = tilted();
        c.phi_b = 0.1 * k;
        const VisibilityCoefficients v = visibility_coefficients(s, c);
        std::vector<FringePoint> pts;
        for (double phi : {0.0, kTwoPi / 3, 2 * kTwoPi / 3}) pts.push_back({phi, correlation_full(s, c, phi), 0});
        const FringeFit f = fit_visibility(pts);
        CHECK(std::abs(f.c_hat - v.mean_term) < 1e-12);
        CHECK(std::abs(f.a_hat - v.amplitude) < 1e-12);
        CHECK(std::abs(f.v_hat - v.visibility) < 1e-10);
        CHECK(f.v_hat >= 0.0);
    }
}

TEST_CASE("fringe fit errors") {
    CHECK_THROWS_AS(fit_visibility({{0.0, 0.5, 0}, {1.0, 0.4, 0}}), InsufficientPhases);
    CHECK_THROWS_AS(fit_visibility({{0.0, 0.5, 0}, {kTwoPi, 0.5, 0}, {1.0, 0.4, 0}}), InsufficientPhases);
    CHECK_THROWS_AS(fit_visibility({{0.0, 0.5, 0}, {1e-11, 0.5, 0}, {2e-11, 0.5, 0}}), DegenerateDesign);
}

TEST_CASE("sampled fringe fit covers the analytic visibility") {
    const SeparableStateSpec s = test::up_plus();
    const InterferometerConfig c = tilted();
    const double v_exact = visibility(s, c);
    std::vector<double> phases;
    for (int i = 0; i < 16; ++i) phases.push_back(kTwoPi * i / 16);
    int inside = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::vector<FringePoint> pts;
        for (const SweepPoint& p : simulate_sweep(s, c, phases, 100000, seed, 4))
            pts.push_back({p.phi_d, p.k_hat, p.batch.n_shots});
        const FringeFit f = fit_visibility(pts);
        if (std::abs(f.v_hat - v_exact) <= 3 * f.stderr_v) ++inside;
    }
    CHECK(inside >= 95);
}

TEST_CASE("zero-visibility point fits to zero") {
    const SeparableStateSpec s = test::up_plus();
    InterferometerConfig c;
    c.b_bs.mix_angle = 1.0;
    const ConditionedState cond = conditioned_state(s, c.b_bs, c.phi_b);
    c.a_bs.mix_angle = cond.vartheta;
    c.phi_a = cond.varphi;
    REQUIRE(visibility(s, c) <= 1e-12);
    std::vector<double> phases;
    for (int i = 0; i < 16; ++i) phases.push_back(kTwoPi * i / 16);
    int inside = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        std::vector<FringePoint> pts;
        for (const SweepPoint& p : simulate_sweep(s, c, phases, 100000, seed, 4))
            pts.push_back({p.phi_d, p.k_hat, p.batch.n_shots});
        const FringeFit f = fit_visibility(pts);
        if (f.v_hat <= 3 * f.stderr_v) ++inside;
    }
    CHECK(inside >= 38);
}

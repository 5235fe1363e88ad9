#include <doctest.h>

#include <random>

#include "discord_scope/errors.hpp"
#include "discord_scope/zerovis.hpp"
#include "support.hpp"

using namespace dscope;

namespace {

InterferometerConfig random_config(std::mt19937_64& gen, bool real_splitters) {
    std::uniform_real_distribution<double> u(0.0, kTwoPi);
    InterferometerConfig c;
    c.a_bs = {u(gen), real_splitters ? 0.0 : u(gen), real_splitters ? 0.0 : u(gen)};
    c.phi_a = u(gen);
    c.b_bs = {u(gen), real_splitters ? 0.0 : u(gen), real_splitters ? 0.0 : u(gen)};
    c.phi_b = u(gen);
    return c;
}

// Distance between two angles modulo pi.
double mod_pi_gap(double a, double b) {
    const double d = std::fmod(std::abs(a - b), kPi);
    return std::min(d, kPi - d);
}

}  // namespace

TEST_CASE("frame vectors") {
    const FrameVectors f = frame_vectors(0.0, 0.0);
    CHECK((f.a1 - BlochVector(1, 0, 0)).norm() < 1e-15);
    CHECK((f.a2 - BlochVector(0, -1, 0)).norm() < 1e-15);
    CHECK((f.a3 - BlochVector(0, 0, 1)).norm() < 1e-15);

    std::mt19937_64 gen(41);
    std::uniform_real_distribution<double> u(0.0, kTwoPi);
    for (int k = 0; k < 200; ++k) {
        const FrameVectors r = frame_vectors(u(gen), u(gen));
        CHECK(std::abs(r.a3.dot(r.a1)) < 1e-15);
        CHECK(std::abs(r.a3.dot(r.a2)) < 1e-15);
        CHECK(std::abs(r.a3.norm() - 1.0) < 1e-15);
    }
}

TEST_CASE("amplitude is the projection of the rotated resultant on a1 + i a2") {
    std::mt19937_64 gen(42);
    for (int k = 0; k < 100; ++k) {
        const SeparableStateSpec s = test::random_spec(gen);
        const InterferometerConfig c = random_config(gen, false);
        const ConditionedState cond = conditioned_state(s, c.b_bs, c.phi_b);
        const FrameVectors f = frame_vectors(c.a_bs.mix_angle, c.a_bs.phi_minus());
        const BlochVector n = rotated_resultant(cond, c.phi_a);
        const Complex proj(n.dot(f.a1), n.dot(f.a2));
        const VisibilityCoefficients v = visibility_coefficients(cond, c);
        CHECK(std::abs(std::abs(v.amplitude) - std::abs(proj) / 4) < 1e-14);
    }
}

TEST_CASE("zero solution special cases") {
    SeparableStateSpec north{{{1.0, test::up(), test::plus()}}};
    const ConditionedState c = conditioned_state(north, {0.4, 0.0, 0.0}, 0.0);
    const ZeroVisSolution sol = zero_visibility_solve(c, 0.0, 0.0);
    CHECK(sol.kind == ZeroVisSolution::Kind::Generic);
    CHECK(std::abs(sol.branches[0].alpha0) < 1e-15);

    std::mt19937_64 gen(43);
    std::uniform_real_distribution<double> u(0.0, kTwoPi);
    for (int k = 0; k < 50; ++k) {
        const double t1 = u(gen), t2 = u(gen), beta = u(gen);
        SeparableStateSpec s{{{0.5, real_state(t1), real_state(t1)}, {0.5, real_state(t2), real_state(t2)}}};
        const ConditionedState rc = conditioned_state(s, {beta, 0.0, 0.0}, 0.0);
        if (rc.degenerate) continue;
        const double vartheta = std::atan2(rc.resultant.x(), rc.resultant.z());
        for (const ZeroPoint& z : zero_visibility_solve(rc, 0.0, 0.0).branches) {
            const double phase = std::min(mod_pi_gap(z.phi_a0, 0.0), 1.0);
            CHECK(phase < 1e-12);
            // phi_A0 = pi flips the effective angle; alpha0 = vartheta mod pi at phi_A0 = 0.
            if (std::abs(wrap_two_pi(z.phi_a0 + 1e-9)) < 1e-6)
                CHECK(mod_pi_gap(z.alpha0, vartheta) < 1e-12);
        }
    }

    const double beta_star = std::asin(0.6);
    const ConditionedState g = conditioned_state(test::grid_state(), {beta_star, 0.0, 0.0}, 0.0);
    CHECK(zero_visibility_solve(g, 0.0, 0.0).kind == ZeroVisSolution::Kind::DegenerateAllAlpha);
}

TEST_CASE("analytic zeros have vanishing visibility") {
    std::mt19937_64 gen(44);
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
        const SeparableStateSpec s = test::random_spec(gen);
        InterferometerConfig c = random_config(gen, k % 2 == 0);
        const ConditionedState cond = conditioned_state(s, c.b_bs, c.phi_b);
        const ZeroVisSolution sol = zero_visibility_solve(cond, c.a_bs.phi_r, c.a_bs.phi_t);
        REQUIRE(sol.kind == ZeroVisSolution::Kind::Generic);
        for (const ZeroPoint& z : sol.branches) {
            c.a_bs.mix_angle = z.alpha0;
            c.phi_a = z.phi_a0;
            worst = std::max(worst, visibility(s, c));
            c.a_bs.mix_angle = z.alpha0 + kPi;
            worst = std::max(worst, visibility(s, c));
        }
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("numeric fallback agrees with the analytic solution") {
    std::mt19937_64 gen(45);
    for (int k = 0; k < 30; ++k) {
        const SeparableStateSpec s = test::random_spec(gen);
        InterferometerConfig c = random_config(gen, true);
        const ConditionedState cond = conditioned_state(s, c.b_bs, c.phi_b);
        const ZeroPoint z = zero_visibility_solve(cond, 0.0, 0.0).branches[0];
        c.phi_a = z.phi_a0;
        const NumericZero nz = numeric_alpha_zero(s, c);
        CHECK(nz.is_zero);
        CHECK(mod_pi_gap(nz.alpha, z.alpha0) < 1e-6);
    }
    InterferometerConfig c;
    c.b_bs.mix_angle = 1.0;
    const NumericZero both = numeric_zero(test::up_plus(), c);
    CHECK(both.is_zero);
    CHECK(mod_pi_gap(both.phi_a, 0.0) < 1e-6);
}

TEST_CASE("landscape sampling") {
    LandscapeRequest req;
    req.nx = req.ny = 2;
    const Landscape two = sample_landscape(test::up_plus(), req);
    CHECK(two.values.size() == 4);
    CHECK(two.xs == std::vector<double>{0.0, kPi});

    // |+> on A: zero line at alpha = pi/2 for every beta, a grid column when nx = 8.
    SeparableStateSpec product{{{1.0, test::plus(), {1.1, 0.4}}}};
    req.nx = req.ny = 8;
    const Landscape l = sample_landscape(product, req, 3);
    for (int j = 0; j < 8; ++j) {
        CHECK(l.at(2, j) <= 1e-10);
        CHECK(l.at(6, j) <= 1e-10);
    }
    const Landscape b = sample_landscape(test::plus_minus(), req);
    for (int j = 0; j < 8; ++j) CHECK(b.at(2, j) <= 1e-10);

    const Landscape serial = sample_landscape(test::up_plus(), {Axis::Alpha, Axis::PhiA, 16, 16, {}}, 1);
    const Landscape threaded = sample_landscape(test::up_plus(), {Axis::Alpha, Axis::PhiA, 16, 16, {}}, 4);
    CHECK(serial.values == threaded.values);

    CHECK(parse_axis("phi_b") == Axis::PhiB);
    CHECK_FALSE(parse_axis("gamma").has_value());
}

TEST_CASE("zero lines of uncorrelated and pure states are constant") {
    TraceOptions opt;
    const ZeroLine b = trace_zero_lines(test::plus_minus(), opt);
    CHECK(b.verification_failures == 0);
    for (std::size_t i = 0; i < b.beta.size(); ++i) {
        if (b.solutions[i].kind != ZeroVisSolution::Kind::Generic) continue;
        CHECK(std::abs(b.solutions[i].branches[0].alpha0 - kPi / 2) < 1e-12);
        CHECK(std::abs(b.solutions[i].branches[1].alpha0 - kPi / 2) < 1e-12);
    }
    const ZeroLine pure = trace_zero_lines(test::rho_theta(0.0), opt);
    // B never reaches D1 at beta = pi, the only degenerate sample.
    REQUIRE(pure.degenerate_marks.size() == 1);
    CHECK(pure.beta[pure.degenerate_marks[0]] == doctest::Approx(kPi));
    for (std::size_t i = 0; i < pure.beta.size(); ++i) {
        if (i == pure.degenerate_marks[0]) continue;
        CHECK(mod_pi_gap(pure.alpha0_tracked[i], 0.0) < 1e-12);
        CHECK(pure.tracked_valid[i]);
    }
    CHECK(pure.jumps.empty());
}

TEST_CASE("zero line tracking") {
    TraceOptions opt;
    opt.fixed_phi_a = 0.0;
    const SeparableStateSpec s = test::rho_theta(5 * kPi / 6);
    const ZeroLine z = trace_zero_lines(s, opt);
    CHECK(z.verification_failures == 0);
    const std::vector<FSample> f = sample_f_curves(s, opt.beta_samples);
    for (std::size_t i = 0; i < z.beta.size(); ++i) {
        REQUIRE(z.tracked_valid[i]);
        const double c = std::cos(z.alpha0_tracked[i]);
        CHECK(std::abs(c * c - f[i].f_alpha) < 1e-10);
        if (i > 0) CHECK(std::abs(z.alpha0_tracked[i] - z.alpha0_tracked[i - 1]) < kPi / 2);
    }
    // The excursion is bounded by the angle between the two A-states.
    const double total = *std::max_element(z.alpha0_tracked.begin(), z.alpha0_tracked.end()) -
                         *std::min_element(z.alpha0_tracked.begin(), z.alpha0_tracked.end());
    CHECK(total <= 5 * kPi / 6 + 1e-9);
    CHECK(max_window_excursion(z, kPi / 4) > 0.6 * kPi);
}

TEST_CASE("fixed-alpha crossings") {
    TraceOptions opt;
    opt.fixed_alpha = kPi / 4;
    const ZeroLine z = trace_zero_lines(test::up_plus(), opt);
    CHECK_FALSE(z.fixed_alpha_roots.empty());
    for (const FixedAlphaRoot& r : z.fixed_alpha_roots) CHECK(r.residual <= 1e-10);
}

TEST_CASE("vertical lines of the grid state") {
    InterferometerConfig base;
    const std::vector<double> lines = find_vertical_lines(test::grid_state(), base, 512);
    REQUIRE(lines.size() == 2);
    for (double b : lines) {
        CHECK(std::abs(std::sin(b) - 0.6) < 1e-6);
        InterferometerConfig c;
        c.b_bs.mix_angle = b;
        for (int i = 0; i < 64; ++i) {
            c.a_bs.mix_angle = kTwoPi * i / 64;
            CHECK(visibility(test::grid_state(), c) <= 1e-10);
        }
    }
    CHECK(find_vertical_lines(test::up_plus(), base, 512).empty());
}

TEST_CASE("landscape classification") {
    CHECK(classify_landscape(test::grid_state()).kind == LandscapeClass::Kind::Grid);
    CHECK(classify_landscape(test::up_plus()).kind == LandscapeClass::Kind::Curved);

    // Same B-state in every component: uncorrelated.
    SeparableStateSpec uncorrelated{{{0.2, test::minus(), test::plus()}, {0.8, test::plus(), test::plus()}}};
    CHECK(classify_landscape(uncorrelated).kind == LandscapeClass::Kind::Barcode);

    // Antipodal A-states with distinct B-states: classically correlated.
    SeparableStateSpec anti{{{0.2, test::minus(), test::minus()}, {0.8, test::plus(), test::plus()}}};
    const LandscapeClass c = classify_landscape(anti);
    CHECK(c.kind == LandscapeClass::Kind::Grid);
    REQUIRE(c.vertical_lines.size() == 2);
    for (double b : c.vertical_lines) CHECK(std::abs(std::sin(b) + 0.6) < 1e-6);
}

TEST_CASE("orthogonality is equivalent to beta-independence") {
    std::mt19937_64 gen(46);
    for (int k = 0; k < 40; ++k) {
        const SeparableStateSpec classical = test::random_classical_spec(gen);
        const LandscapeClass c = classify_landscape(classical);
        CHECK(c.f_alpha_variation <= 1e-10);
        CHECK(c.f_phi_variation <= 1e-10);

        SeparableStateSpec generic = test::random_spec(gen);
        if (generic.components.size() < 2) continue;
        const LandscapeClass g = classify_landscape(generic);
        CHECK(g.kind == LandscapeClass::Kind::Curved);
        CHECK(trace_zero_lines(generic).degenerate_marks.empty());
    }
}

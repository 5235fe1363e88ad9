#include <doctest.h>

#include <random>

#include "discord_scope/errors.hpp"
#include "discord_scope/states.hpp"
#include "support.hpp"

using namespace dscope;

namespace {

// Direct |A><A| (x) |B><B| from kets, element by element.
ComplexMat4 product_oracle(const BlochAngles& a, const BlochAngles& b) {
    const Ket ka = bloch_ket(a), kb = bloch_ket(b);
    ComplexMat4 m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            m(i, j) = ka(i / 2) * kb(i % 2) * std::conj(ka(j / 2) * kb(j % 2));
    return m;
}

}  // namespace

TEST_CASE("validate") {
    SeparableStateSpec one{{{1.0, {0.3, 0.2}, {1.0, 4.0}}}};
    const SeparableStateSpec v = validate(one);
    CHECK(v.components.size() == 1);
    CHECK(v.components[0].weight == 1.0);

    SeparableStateSpec nearly{{{0.5, test::up(), test::up()}, {0.5 + 3e-10, test::down(), test::up()}}};
    const SeparableStateSpec r = validate(nearly);
    CHECK(std::abs(r.components[0].weight + r.components[1].weight - 1.0) < 1e-15);

    SeparableStateSpec heavy{{{0.6, test::up(), test::up()}, {0.6, test::down(), test::up()}}};
    CHECK_THROWS_AS(validate(heavy), InvalidWeights);
    SeparableStateSpec negative{{{1.5, test::up(), test::up()}, {-0.5, test::down(), test::up()}}};
    CHECK_THROWS_AS(validate(negative), InvalidWeights);
    CHECK_THROWS_AS(validate(SeparableStateSpec{}), InvalidWeights);
}

TEST_CASE("assemble_density") {
    SeparableStateSpec pure{{{1.0, test::up(), test::up()}}};
    ComplexMat4 expect = ComplexMat4::Zero();
    expect(0, 0) = 1.0;
    CHECK((assemble_density(pure) - expect).cwiseAbs().maxCoeff() < 1e-15);

    const ComplexMat4 mixed = assemble_density(test::up_plus());
    const ComplexMat4 oracle = 0.5 * product_oracle(test::up(), test::up()) +
                               0.5 * product_oracle(test::plus(), test::plus());
    CHECK((mixed - oracle).cwiseAbs().maxCoeff() < 1e-15);

    const ComplexMat4 three = assemble_density(test::three_state(kPi / 2));
    CHECK(std::abs(three.trace() - 1.0) < 1e-14);
    for (double ev : hermitian_eigenvalues(three)) CHECK(ev > -1e-14);
}

TEST_CASE("assemble_density is affine in the weights") {
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        const double w = u(gen);
        const BlochAngles a1 = test::random_angles(gen), b1 = test::random_angles(gen);
        const BlochAngles a2 = test::random_angles(gen), b2 = test::random_angles(gen);
        SeparableStateSpec mix{{{w, a1, b1}, {1.0 - w, a2, b2}}};
        const ComplexMat4 expect = w * product_oracle(a1, b1) + (1.0 - w) * product_oracle(a2, b2);
        CHECK((assemble_density(mix) - expect).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("a_classicality") {
    SeparableStateSpec pm{{{0.5, test::plus(), test::up()}, {0.5, test::minus(), test::down()}}};
    const ClassicalityReport c = a_classicality(pm);
    CHECK(c.is_a_classical);
    CHECK(c.grouping.size() == 2);

    CHECK_FALSE(a_classicality(test::up_plus()).is_a_classical);
    CHECK(a_classicality(SeparableStateSpec{{{1.0, {1.0, 2.0}, {0.5, 0.1}}}}).is_a_classical);

    // coincident states merge into one group
    SeparableStateSpec same{{{0.3, test::plus(), test::up()}, {0.7, test::plus(), test::down()}}};
    const ClassicalityReport s = a_classicality(same);
    CHECK(s.is_a_classical);
    CHECK(s.grouping.size() == 1);
}

TEST_CASE("a_classicality is invariant under a single component's phase shift") {
    std::mt19937_64 gen(22);
    std::uniform_real_distribution<double> u(0.0, kTwoPi);
    for (int k = 0; k < 50; ++k) {
        SeparableStateSpec s = (k % 2) ? test::random_classical_spec(gen) : test::random_spec(gen);
        const bool before = a_classicality(s).is_a_classical;
        // A global phase on |A_v> leaves the projector, hence the Bloch angles, unchanged.
        const Ket k0 = bloch_ket(s.components[0].a) * std::polar(1.0, u(gen));
        const auto [w, n] = bloch_decompose(ComplexMat2(k0 * k0.adjoint()));
        s.components[0].a = bloch_angles(n);
        CHECK(a_classicality(s).is_a_classical == before);
    }
}

TEST_CASE("spec JSON round trip and error paths") {
    const SeparableStateSpec fig = test::up_plus();
    const SeparableStateSpec back = spec_from_json(nlohmann::json::parse(spec_to_json(fig).dump()));
    REQUIRE(back.components.size() == 2);
    CHECK(back.components[1].a.theta == doctest::Approx(kPi / 2));

    const auto doc = nlohmann::json::parse(
        R"({"components":[{"w":1,"a":{"theta":90,"phi":0},"b":{"theta":0,"phi":0}}]})");
    CHECK(spec_from_json(doc, true).components[0].a.theta == doctest::Approx(kPi / 2));

    try {
        spec_from_json(nlohmann::json::parse(R"({"components":[{"w":1,"a":{"theta":0,"phi":0}}]})"));
        FAIL("expected InvalidSpec");
    } catch (const InvalidSpec& e) {
        CHECK(e.field() == "components[0].b");
    }
    try {
        spec_from_json(nlohmann::json::parse(
            R"({"components":[{"w":0.6,"a":{"theta":0,"phi":0},"b":{"theta":0,"phi":0}},
                              {"w":0.6,"a":{"theta":0,"phi":0},"b":{"theta":0,"phi":0}}]})"));
        FAIL("expected InvalidSpec");
    } catch (const InvalidSpec& e) {
        CHECK(e.field() == "components[].w");
    }
    CHECK_THROWS_AS(spec_from_json(nlohmann::json::parse("[]")), InvalidSpec);
}

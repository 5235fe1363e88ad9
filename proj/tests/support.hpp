#pragma once

#include <cmath>
#include <random>

#include "discord_scope/states.hpp"

namespace dscope::test {

inline BlochAngles up() { return {0.0, 0.0}; }
inline BlochAngles down() { return {kPi, 0.0}; }
inline BlochAngles plus() { return {kPi / 2, 0.0}; }
inline BlochAngles minus() { return {kPi / 2, kPi}; }

inline SeparableStateSpec up_plus() { return {{{0.5, up(), up()}, {0.5, plus(), plus()}}}; }
inline SeparableStateSpec plus_minus() { return {{{0.5, plus(), plus()}, {0.5, minus(), minus()}}}; }

/// 1/2 |up up><up up| + 1/2 |theta theta><theta theta|
inline SeparableStateSpec rho_theta(double theta) {
    return {{{0.5, up(), up()}, {0.5, real_state(theta), real_state(theta)}}};
}

/// 1/2 |up up><up up| + 1/2 |theta_a theta><theta_a theta|
inline SeparableStateSpec rho_theta_a(double theta_a, double theta) {
    return {{{0.5, up(), up()}, {0.5, real_state(theta_a), real_state(theta)}}};
}

inline SeparableStateSpec three_state(double theta) {
    const double w = 1.0 / 3.0;
    return {{{w, up(), up()}, {w, down(), down()}, {w, real_state(theta), real_state(theta)}}};
}

/// Weights 1/5, 4/5 with A = up, down and B = +, -.
inline SeparableStateSpec grid_state() { return {{{0.2, up(), plus()}, {0.8, down(), minus()}}}; }

/// A1 = |+>, A2 Bloch azimuth pi + phi2, B = |+>, |->, equal weights.
inline SeparableStateSpec rhophi(double phi2) {
    return {{{0.5, plus(), plus()}, {0.5, {kPi / 2, kPi + phi2}, minus()}}};
}

inline BlochAngles random_angles(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return {std::acos(1.0 - 2.0 * u(gen)), kTwoPi * u(gen)};
}

inline SeparableStateSpec random_spec(std::mt19937_64& gen, int max_components = 4) {
    std::uniform_int_distribution<int> count(1, max_components);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    SeparableStateSpec s;
    const int n = count(gen);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        s.components.push_back({u(gen), random_angles(gen), random_angles(gen)});
        total += s.components.back().weight;
    }
    for (auto& c : s.components) c.weight /= total;
    return s;
}

/// A-states drawn from one antipodal pair (or a single direction).
inline SeparableStateSpec random_classical_spec(std::mt19937_64& gen) {
    SeparableStateSpec s = random_spec(gen, 4);
    const BlochAngles axis = random_angles(gen);
    const BlochAngles anti{kPi - axis.theta, axis.phi + kPi};
    std::bernoulli_distribution flip(0.5);
    for (auto& c : s.components) c.a = flip(gen) ? axis : anti;
    return s;
}

}  // namespace dscope::test

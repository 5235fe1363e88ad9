#pragma once

// Separable two-qubit states  rho^AB = sum_v w_v |A_v><A_v| (x) |B_v><B_v|.

#include <nlohmann/json.hpp>

#include <vector>

#include "discord_scope/qcore.hpp"

namespace dscope {

struct Component {
    double weight = 1.0;
    BlochAngles a;
    BlochAngles b;
};

struct SeparableStateSpec {
    std::vector<Component> components;
};

/// Pairwise-orthogonality structure of the A-states.
struct ClassicalityReport {
    bool is_a_classical = false;
    // At most two mutually orthogonal groups of component indices; empty
    // when the A-states are not classical.
    std::vector<std::vector<std::size_t>> grouping;
    // Largest distance of any |<A_mu|A_nu>| from the nearer of {0, 1}.
    double gram_offsets = 0.0;
};

inline constexpr double kWeightWindow = 1e-9;
inline constexpr double kOrthogonalityTol = 1e-9;

/// Checks weights, renormalizes inside the 1e-9 window, canonicalizes angles.
/// Throws InvalidWeights.
SeparableStateSpec validate(const SeparableStateSpec& spec);

ComplexMat4 assemble_density(const SeparableStateSpec& spec);

ClassicalityReport a_classicality(const SeparableStateSpec& spec,
                                  double tol = kOrthogonalityTol);

// JSON document:
//   {"components": [{"w": .., "a": {"theta": .., "phi": ..},
//                           "b": {"theta": .., "phi": ..}}]}
// Angles in radians unless `degrees` is set. Throws InvalidSpec naming the
// offending field.
SeparableStateSpec spec_from_json(const nlohmann::json& doc, bool degrees = false);
nlohmann::ordered_json spec_to_json(const SeparableStateSpec& spec);

// Convenience builders for the real states used throughout the examples:
// |theta> = cos(theta/2)|up> + sin(theta/2)|down>.
inline BlochAngles real_state(double theta) { return canonicalize({theta, 0.0}); }

}  // namespace dscope

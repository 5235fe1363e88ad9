#pragma once

// A-discord by minimization over projective measurements on A, and the
// interferometric quantifiers Delta^2_alpha, Delta^2_phi built from the
// beta-dependence of the zero-visibility solution.

#include <vector>

#include "discord_scope/interferometer.hpp"
#include "discord_scope/qcore.hpp"
#include "discord_scope/states.hpp"
#include "discord_scope/zerovis.hpp"

namespace dscope {

/// Projectors onto +axis and -axis of the Bloch sphere.
struct MeasurementBasis {
    BlochAngles axis;

    ComplexMat2 projector(int sign) const;
};

struct DiscordResult {
    double d_a = 0.0;
    MeasurementBasis optimal_basis;
    double mutual_info = 0.0;
    double j_a = 0.0;
    double conditional_entropy_min = 0.0;
};

struct DiscordOptions {
    int grid_n = 64;
    double refine_tol = 1e-8;
    int threads = 1;
};

/// S(rho^A) + S(rho^B) - S(rho^AB), bits, clamped at zero.
double mutual_information(const ComplexMat4& rho_ab);

/// sum_mu p_mu S(rho_{B|Pi_mu}) for the two projectors of `basis`.
double conditional_entropy(const ComplexMat4& rho_ab, const MeasurementBasis& basis);

/// Coarse grid_n x grid_n scan of (theta, phi) in [0, pi] x [0, 2pi), then
/// compass search with halving steps down to refine_tol.
DiscordResult discord(const ComplexMat4& rho_ab, const DiscordOptions& options = {});

inline constexpr double kWitnessThreshold = 1e-10;
struct QuantifierResult {
    double delta2_alpha = 0.0;
    double delta2_phi = 0.0;
    double f_alpha_mean = 0.0;
    double f_phi_mean = 0.0;
    std::vector<FSample> samples;
    bool alpha_all_masked = false;
    bool phi_all_masked = false;  // reported with delta2_phi := 0
    bool witness = false;
};

struct QuantifierOptions {
    int beta_grid_n = 512;
    InterferometerConfig base;  // B splitter phases and phi_b; beta is swept
    double witness_threshold = kWitnessThreshold;
};

/// Periodic-grid mean and variance of a masked curve.
struct MaskedMoments {
    double mean = 0.0;
    double variance = 0.0;
    std::size_t used = 0;
};
MaskedMoments masked_moments(const std::vector<double>& values, const std::vector<bool>& mask);

// Single-quantifier variants leave the other quantifier at zero; witness is
// evaluated on what was computed.
QuantifierResult delta_alpha(const SeparableStateSpec& spec, const QuantifierOptions& options = {});
QuantifierResult delta_phi(const SeparableStateSpec& spec, const QuantifierOptions& options = {});

/// Both quantifiers and witness = delta2_alpha + delta2_phi > threshold.
QuantifierResult combined_witness(const SeparableStateSpec& spec,
                                  const QuantifierOptions& options = {});

}  // namespace dscope

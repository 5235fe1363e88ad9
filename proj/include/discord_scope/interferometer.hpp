#pragma once

// Scattering through the source, active and detecting Mach-Zehnder
// interferometers, and the joint detection correlation K(phi_d).

#include <array>
#include <vector>

#include "discord_scope/qcore.hpp"
#include "discord_scope/states.hpp"

namespace dscope {

/// r = e^{i phi_r} cos(angle/2), t = e^{i phi_t} sin(angle/2).
struct BeamSplitterSetting {
    double mix_angle = 0.0;
    double phi_r = 0.0;
    double phi_t = 0.0;

    Complex r() const { return std::polar(std::cos(mix_angle / 2), phi_r); }
    Complex t() const { return std::polar(1.0, phi_t) * std::sin(mix_angle / 2); }
    double phi_minus() const { return phi_r - phi_t; }
    double phi_plus() const { return phi_r + phi_t; }
};

inline BeamSplitterSetting fifty_fifty() { return {kPi / 2, 0.0, 0.0}; }

struct InterferometerConfig {
    BeamSplitterSetting a_bs;
    double phi_a = 0.0;
    BeamSplitterSetting b_bs;
    double phi_b = 0.0;
    BeamSplitterSetting detector_bs = fifty_fifty();
};

inline constexpr double kDegeneracyTol = 1e-12;

/// Unnormalized A-state conditioned on B reaching detector D1:
/// rho^{A|B} = sum_v w^B_v rho^A_v = 1/2 (W_B I + N . sigma).
struct ConditionedState {
    std::vector<double> weights;  // w^B_v
    double w_total = 0.0;         // W_B
    BlochVector resultant = BlochVector::Zero();  // N
    double resultant_norm = 0.0;                  // C = |N|
    bool degenerate = true;                       // C below kDegeneracyTol
    BlochVector unit_direction = BlochVector::Zero();  // n, zero when degenerate
    double vartheta = 0.0;
    double varphi = 0.0;

    ComplexMat2 matrix() const { return bloch_operator(resultant, w_total); }
};

/// K(phi_d) = C + 2|A| cos(phi_d + arg A).
struct VisibilityCoefficients {
    double mean_term = 0.0;  // C
    Complex amplitude;       // A
    double visibility = 0.0;

    double correlation(double phi_d) const {
        return mean_term + 2.0 * (amplitude * std::polar(1.0, phi_d)).real();
    }
};

/// (r, t; -t*, r*) . exp(i sigma_3 loop_phase / 2)
ComplexMat2 scattering_matrix(const BeamSplitterSetting& bs, double loop_phase);

/// Brute-force joint probability that A and B land in the given detectors
/// (0 = D1, 1 = D2), by conjugating rho^AB with the composite 4x4 S-matrix.
double joint_probability(const ComplexMat4& rho_ab, const InterferometerConfig& config,
                         double phi_d, int a_detector, int b_detector);

/// K = Tr[P_A P_B S rho^AB S^dagger] with P = |up><up| on both sides.
double correlation_full(const SeparableStateSpec& spec, const InterferometerConfig& config,
                        double phi_d);

ConditionedState conditioned_state(const SeparableStateSpec& spec,
                                   const BeamSplitterSetting& b_bs, double phi_b);

/// C and A from the conditioned state, S_A and S_d. Throws ZeroMeanTerm when
/// C vanishes while A does not.
VisibilityCoefficients visibility_coefficients(const ConditionedState& cond,
                                               const InterferometerConfig& config);
VisibilityCoefficients visibility_coefficients(const SeparableStateSpec& spec,
                                               const InterferometerConfig& config);

double visibility(const SeparableStateSpec& spec, const InterferometerConfig& config);

}  // namespace dscope

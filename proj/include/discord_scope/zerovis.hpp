#pragma once

// Zero-visibility solutions, visibility landscapes and their classification.
//
// Visibility vanishes when S_A diagonalizes rho^{A|B}, i.e. when the Bloch
// vector N of the conditioned state, rotated by the loop phase, is parallel
// to a3(alpha, phi_-). With n = N/|N| at polar angle vartheta and azimuth
// varphi the two solutions in alpha in [0, pi] are
//   plus:  alpha0 = vartheta,      Phi0 = varphi
//   minus: alpha0 = pi - vartheta, Phi0 = varphi + pi
// with phi_A0 = Phi0 - phi_-, and each repeats with period pi in alpha.

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "discord_scope/interferometer.hpp"
#include "discord_scope/states.hpp"

namespace dscope {

struct FrameVectors {
    BlochVector a1;
    BlochVector a2;
    BlochVector a3;
};

/// a1 = (cos a cos p, cos a sin p, -sin a), a2 = (sin p, -cos p, 0),
/// a3 = a2 x a1.
FrameVectors frame_vectors(double alpha, double phi_minus);

enum class Branch { Plus, Minus };

struct ZeroPoint {
    Branch branch = Branch::Plus;
    double alpha0 = 0.0;  // [0, pi]
    double Phi0 = 0.0;    // [0, 2pi)
    double phi_a0 = 0.0;  // [0, 2pi)
};

struct ZeroVisSolution {
    enum class Kind { Generic, DegenerateAllAlpha };
    Kind kind = Kind::Generic;
    std::array<ZeroPoint, 2> branches{};  // meaningful for Generic only
};

ZeroVisSolution zero_visibility_solve(const ConditionedState& cond, double phi_r,
                                      double phi_t);

/// Loop-phase-rotated resultant R_z(-phi_A) N; the oscillation amplitude is
/// proportional to its projection on a1 + i a2.
BlochVector rotated_resultant(const ConditionedState& cond, double phi_a);

// --- landscapes -----------------------------------------------------------

enum class Axis { Alpha, Beta, PhiA, PhiB };

const char* axis_name(Axis a);
std::optional<Axis> parse_axis(std::string_view name);

struct LandscapeRequest {
    Axis x = Axis::Alpha;
    Axis y = Axis::Beta;
    int nx = 256;
    int ny = 256;
    InterferometerConfig base;  // supplies every parameter not on an axis
};

/// Visibility on the uniform periodic grid x_i = 2 pi i / nx, y_j = 2 pi j / ny.
/// values[j * nx + i] holds V(x_i, y_j).
struct Landscape {
    LandscapeRequest request;
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<double> values;

    double at(int i, int j) const {
        return values[static_cast<std::size_t>(j) * xs.size() + static_cast<std::size_t>(i)];
    }
};

void set_axis(InterferometerConfig& config, Axis axis, double value);
double get_axis(const InterferometerConfig& config, Axis axis);

Landscape sample_landscape(const SeparableStateSpec& spec, const LandscapeRequest& request,
                           int threads = 1);

// --- zero-line tracing ----------------------------------------------------

struct TraceOptions {
    int beta_samples = 512;
    InterferometerConfig base;  // a/b splitter phases, phi_b, detector
    // Follow the branch whose phi_A0 matches this loop phase (mod 2pi), as in
    // an alpha-beta landscape at fixed phi_A. Unset: phi_A is free and the
    // branch closest in (alpha, phi_A) to the previous sample is followed.
    std::optional<double> fixed_phi_a;
    // When set, also locate the beta0 values where the zero line crosses it.
    std::optional<double> fixed_alpha;
    double verify_tol = 1e-8;
    bool throw_on_failure = true;
};

struct FixedAlphaRoot {
    double beta0 = 0.0;
    double phi_a0 = 0.0;
    double residual = 0.0;
};

struct ZeroLine {
    std::vector<double> beta;
    std::vector<ZeroVisSolution> solutions;
    std::vector<double> residual;           // worst V over claimed zeros per sample
    std::vector<double> alpha0_tracked;     // unwrapped, continuous where possible
    std::vector<double> phi_a0_tracked;     // loop phase of the followed branch
    std::vector<bool> tracked_valid;        // false: no zero at the fixed phi_A
    std::vector<std::size_t> jumps;         // samples where the mod-pi unwrap stepped
    std::vector<std::size_t> degenerate_marks;
    std::vector<double> vertical_lines;
    std::vector<FixedAlphaRoot> fixed_alpha_roots;
    std::size_t verification_failures = 0;
};

ZeroLine trace_zero_lines(const SeparableStateSpec& spec, const TraceOptions& options = {});

/// Beta values where N vanishes with W_B > 0 (visibility zero for every
/// alpha). Only A-classical states with two antipodal groups have them.
std::vector<double> find_vertical_lines(const SeparableStateSpec& spec,
                                        const InterferometerConfig& base, int beta_samples);

/// Largest alpha0 excursion of the tracked line inside any beta window of the
/// given width.
double max_window_excursion(const ZeroLine& line, double window);

// --- numeric fallback -----------------------------------------------------

struct NumericZero {
    double alpha = 0.0;
    double phi_a = 0.0;
    double visibility = 0.0;
    bool is_zero = false;  // visibility <= 1e-10
};

/// Golden-section minimization of V over alpha in [0, pi] at the config's
/// beta and phi_A, seeded by a coarse scan.
NumericZero numeric_alpha_zero(const SeparableStateSpec& spec, const InterferometerConfig& config);

/// Nested golden-section minimization of V over (alpha, phi_A).
NumericZero numeric_zero(const SeparableStateSpec& spec, const InterferometerConfig& config);

// --- f-curves and classification ------------------------------------------

/// One beta sample of the projections of the zero line.
struct FSample {
    double beta = 0.0;
    double f_alpha = 0.0;  // cos^2 alpha0 = n_z^2
    double f_phi = 0.0;    // cos^2 Phi0 = N_x^2 / (N_x^2 + N_y^2)
    bool alpha_masked = false;
    bool phi_masked = false;
};

inline constexpr double kPhiMaskTol = 1e-24;

/// f-curves on beta_i = 2 pi i / n with the base config's B phases and phi_b.
std::vector<FSample> sample_f_curves(const SeparableStateSpec& spec, int beta_samples,
                                     const InterferometerConfig& base = {});

struct LandscapeClass {
    enum class Kind { Barcode, Grid, Curved };
    Kind kind = Kind::Curved;
    double f_alpha_variation = 0.0;  // max |f_alpha - mean| over unmasked samples
    double f_phi_variation = 0.0;
    std::vector<double> vertical_lines;
};

const char* landscape_kind_name(LandscapeClass::Kind k);

LandscapeClass classify_landscape(const SeparableStateSpec& spec, double tol = 1e-10,
                                  int beta_samples = 512,
                                  const InterferometerConfig& base = {});

}  // namespace dscope

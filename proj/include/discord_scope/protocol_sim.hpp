#pragma once

// Shot-level emulation of the state-preparation protocol: per shot a source
// component v is drawn with probability w_v, then the joint detector outcome
// is drawn from that component's table. Visibility is estimated by a linear
// fringe fit of the coincidence fraction against phi_d.
//
// Random stream: shots are split into blocks of kShotBlock; block b uses a
// std::mt19937_64 seeded with split_seed(seed, b). Within a block each shot
// consumes two draws, u1 for v and u2 for the outcome, with
// u = (x >> 11) * 2^-53. Counts are therefore independent of thread count.

#include <array>
#include <cstdint>
#include <vector>

#include "discord_scope/interferometer.hpp"
#include "discord_scope/states.hpp"

namespace dscope {

inline constexpr std::size_t kShotBlock = 65536;

/// splitmix64 finalizer of seed + (index + 1) * golden gamma.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index);

/// Outcome order (A, B): D1D1, D1D2, D2D1, D2D2.
using OutcomeTable = std::array<double, 4>;

struct ShotBatch {
    std::uint64_t n_shots = 0;
    std::uint64_t seed = 0;
    std::array<std::uint64_t, 4> counts{};
};

struct FringePoint {
    double phi_d = 0.0;
    double k_hat = 0.0;
    std::uint64_t n_shots = 0;  // 0: noiseless input, unit weight
};

struct FringeFit {
    double c_hat = 0.0;
    double a_mag_hat = 0.0;
    double a_phase_hat = 0.0;
    double v_hat = 0.0;
    double stderr_v = 0.0;
    double residual_rms = 0.0;
    Complex a_hat;
};

std::vector<OutcomeTable> outcome_distribution(const SeparableStateSpec& spec,
                                               const InterferometerConfig& config, double phi_d);

ShotBatch sample_shots(const SeparableStateSpec& spec, const InterferometerConfig& config,
                       double phi_d, std::uint64_t n_shots, std::uint64_t seed, int threads = 1);

double estimate_K(const ShotBatch& batch);

/// Binomial standard error sqrt(K(1-K)/n) of estimate_K.
double estimate_K_stderr(const ShotBatch& batch);

/// Weighted linear least squares of K = C + 2 Re A cos phi_d - 2 Im A sin phi_d.
FringeFit fit_visibility(const std::vector<FringePoint>& sweep);

struct SweepPoint {
    double phi_d = 0.0;
    ShotBatch batch;
    double k_hat = 0.0;
    double k_stderr = 0.0;
    double k_exact = 0.0;
};

/// One batch per phase; phase i uses seed split_seed(seed, i) as its batch seed.
std::vector<SweepPoint> simulate_sweep(const SeparableStateSpec& spec,
                                       const InterferometerConfig& config,
                                       const std::vector<double>& phases, std::uint64_t n_shots,
                                       std::uint64_t seed, int threads = 1);

}  // namespace dscope

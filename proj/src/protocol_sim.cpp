#include "discord_scope/protocol_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "discord_scope/errors.hpp"
#include "discord_scope/parallel.hpp"

namespace dscope {

namespace {

constexpr double kPhaseDistinctTol = 1e-12;
constexpr double kDesignRcond = 1e-12;

double unit_draw(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

template <std::size_t N>
std::size_t pick(const std::array<double, N>& cumulative, double u) {
    for (std::size_t i = 0; i + 1 < N; ++i)
        if (u < cumulative[i]) return i;
    return N - 1;
}

std::size_t pick(const std::vector<double>& cumulative, double u) {
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                                 cumulative.size() - 1);
}

}  // namespace

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<OutcomeTable> outcome_distribution(const SeparableStateSpec& spec,
                                               const InterferometerConfig& config, double phi_d) {
    const SeparableStateSpec s = validate(spec);
    std::vector<OutcomeTable> out;
    out.reserve(s.components.size());
    for (const auto& c : s.components) {
        const ComplexMat4 rho = kron(bloch_to_density(c.a), bloch_to_density(c.b));
        OutcomeTable t{};
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                t[static_cast<std::size_t>(2 * a + b)] =
                    std::max(joint_probability(rho, config, phi_d, a, b), 0.0);
        out.push_back(t);
    }
    return out;
}

ShotBatch sample_shots(const SeparableStateSpec& spec, const InterferometerConfig& config,
                       double phi_d, std::uint64_t n_shots, std::uint64_t seed, int threads) {
    const SeparableStateSpec s = validate(spec);
    const std::vector<OutcomeTable> tables = outcome_distribution(s, config, phi_d);

    std::vector<double> comp_cdf;
    double acc = 0.0;
    for (const auto& c : s.components) comp_cdf.push_back(acc += c.weight);
    std::vector<OutcomeTable> outcome_cdf(tables.size());
    for (std::size_t v = 0; v < tables.size(); ++v) {
        double a = 0.0;
        const double total = tables[v][0] + tables[v][1] + tables[v][2] + tables[v][3];
        for (std::size_t k = 0; k < 4; ++k) outcome_cdf[v][k] = (a += tables[v][k]) / total;
    }

    const std::uint64_t blocks = (n_shots + kShotBlock - 1) / kShotBlock;
    std::vector<std::array<std::uint64_t, 4>> partial(static_cast<std::size_t>(blocks));
    parallel_for(partial.size(), threads, [&](std::size_t b) {
        std::mt19937_64 gen(split_seed(seed, b));
        const std::uint64_t begin = b * kShotBlock;
        const std::uint64_t end = std::min<std::uint64_t>(n_shots, begin + kShotBlock);
        std::array<std::uint64_t, 4> counts{};
        for (std::uint64_t i = begin; i < end; ++i) {
            const std::size_t v = pick(comp_cdf, unit_draw(gen) * acc);
            ++counts[pick(outcome_cdf[v], unit_draw(gen))];
        }
        partial[b] = counts;
    });

    ShotBatch batch;
    batch.n_shots = n_shots;
    batch.seed = seed;
    for (const auto& p : partial)
        for (std::size_t k = 0; k < 4; ++k) batch.counts[k] += p[k];
    return batch;
}

double estimate_K(const ShotBatch& batch) {
    return batch.n_shots == 0 ? 0.0
                              : static_cast<double>(batch.counts[0]) /
                                    static_cast<double>(batch.n_shots);
}

double estimate_K_stderr(const ShotBatch& batch) {
    if (batch.n_shots == 0) return 0.0;
    const double k = estimate_K(batch);
    return std::sqrt(k * (1.0 - k) / static_cast<double>(batch.n_shots));
}

FringeFit fit_visibility(const std::vector<FringePoint>& sweep) {
    std::vector<double> distinct;
    for (const auto& p : sweep) {
        const double w = wrap_two_pi(p.phi_d);
        const bool seen = std::any_of(distinct.begin(), distinct.end(), [w](double d) {
            const double gap = std::abs(d - w);
            return std::min(gap, kTwoPi - gap) < kPhaseDistinctTol;
        });
        if (!seen) distinct.push_back(w);
    }
    if (distinct.size() < 3)
        throw InsufficientPhases("fringe fit needs at least 3 distinct phi_d values, got " +
                                 std::to_string(distinct.size()));

    const bool noiseless =
        std::any_of(sweep.begin(), sweep.end(), [](const FringePoint& p) { return p.n_shots == 0; });
    const auto m = static_cast<Eigen::Index>(sweep.size());
    Eigen::MatrixXd x(m, 3);
    Eigen::VectorXd y(m), sqrt_w(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const FringePoint& p = sweep[static_cast<std::size_t>(i)];
        x(i, 0) = 1.0;
        x(i, 1) = 2.0 * std::cos(p.phi_d);
        x(i, 2) = -2.0 * std::sin(p.phi_d);
        y(i) = p.k_hat;
        if (noiseless) {
            sqrt_w(i) = 1.0;
        } else {
            // Laplace-smoothed binomial variance keeps weights finite at K = 0, 1.
            const double n = static_cast<double>(p.n_shots);
            const double q = (p.k_hat * n + 1.0) / (n + 2.0);
            sqrt_w(i) = std::sqrt(n / (q * (1.0 - q)));
        }
    }
    const Eigen::MatrixXd xw = sqrt_w.asDiagonal() * x;
    const Eigen::VectorXd yw = sqrt_w.asDiagonal() * y;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(xw, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd sv = svd.singularValues();
    if (sv(2) <= kDesignRcond * sv(0)) throw DegenerateDesign("fringe design matrix is rank deficient");
    const Eigen::Vector3d beta = svd.solve(yw);

    const Eigen::VectorXd resid = y - x * beta;
    Eigen::Matrix3d cov = (xw.transpose() * xw).inverse();
    if (noiseless) {
        const double dof = static_cast<double>(m - 3);
        cov *= dof > 0 ? (sqrt_w.asDiagonal() * resid).squaredNorm() / dof : 0.0;
    }

    FringeFit fit;
    fit.c_hat = beta(0);
    fit.a_hat = {beta(1), beta(2)};
    fit.a_mag_hat = std::abs(fit.a_hat);
    fit.a_phase_hat = std::arg(fit.a_hat);
    fit.residual_rms = std::sqrt(resid.squaredNorm() / static_cast<double>(m));
    const double c = std::abs(fit.c_hat);
    if (c == 0.0) {
        fit.v_hat = fit.a_mag_hat == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        fit.stderr_v = std::numeric_limits<double>::infinity();
        return fit;
    }
    fit.v_hat = fit.a_mag_hat / c;
    if (fit.a_mag_hat > 1e-15) {
        const Eigen::Vector3d grad(-fit.v_hat / fit.c_hat, beta(1) / (fit.a_mag_hat * c),
                                   beta(2) / (fit.a_mag_hat * c));
        fit.stderr_v = std::sqrt(std::max(grad.dot(cov * grad), 0.0));
    } else {
        fit.stderr_v = std::sqrt(std::max(0.5 * (cov(1, 1) + cov(2, 2)), 0.0)) / c;
    }
    return fit;
}

std::vector<SweepPoint> simulate_sweep(const SeparableStateSpec& spec,
                                       const InterferometerConfig& config,
                                       const std::vector<double>& phases, std::uint64_t n_shots,
                                       std::uint64_t seed, int threads) {
    std::vector<SweepPoint> out;
    out.reserve(phases.size());
    for (std::size_t i = 0; i < phases.size(); ++i) {
        SweepPoint p;
        p.phi_d = phases[i];
        p.batch = sample_shots(spec, config, phases[i], n_shots, split_seed(seed, i), threads);
        p.k_hat = estimate_K(p.batch);
        p.k_stderr = estimate_K_stderr(p.batch);
        p.k_exact = correlation_full(spec, config, phases[i]);
        out.push_back(p);
    }
    return out;
}

}  // namespace dscope

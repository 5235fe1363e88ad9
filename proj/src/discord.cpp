#include "discord_scope/discord.hpp"


#include "discord_scope/parallel.hpp"

namespace dscope {

namespace {

constexpr double kOutcomeProbabilityFloor = 1e-14;

BlochAngles antipode(const BlochAngles& a) { return {kPi - a.theta, a.phi + kPi}; }

// Unnormalized B-state after A is projected onto |m>: <m|_A rho |m>_A.
ComplexMat2 project_a(const ComplexMat4& rho, const Ket& m) {
    ComplexMat2 out = ComplexMat2::Zero();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out += std::conj(m(i)) * m(j) * rho.block<2, 2>(2 * i, 2 * j);
    return out;
}

double objective(const ComplexMat4& rho, double theta, double phi) {
    return conditional_entropy(rho, MeasurementBasis{{theta, phi}});
}

}  // namespace

ComplexMat2 MeasurementBasis::projector(int sign) const {
    return bloch_to_density(sign >= 0 ? axis : antipode(axis));
}

double mutual_information(const ComplexMat4& rho_ab) {
    const double mi = von_neumann_entropy(partial_trace(rho_ab, Subsystem::B)) +
                      von_neumann_entropy(partial_trace(rho_ab, Subsystem::A)) -
                      von_neumann_entropy(rho_ab);
    return std::max(mi, 0.0);
}

double conditional_entropy(const ComplexMat4& rho_ab, const MeasurementBasis& basis) {
    double s = 0.0;
    for (const BlochAngles& dir : {basis.axis, antipode(basis.axis)}) {
        const ComplexMat2 sub = project_a(rho_ab, bloch_ket(dir));
        const double p = sub.trace().real();
        if (p < kOutcomeProbabilityFloor) continue;
        s += p * von_neumann_entropy(sub / p);
    }
    return s;
}

DiscordResult discord(const ComplexMat4& rho_ab, const DiscordOptions& options) {
    const int n = std::max(options.grid_n, 2);
    const double dtheta = kPi / (n - 1);
    const double dphi = kTwoPi / n;

    std::vector<double> grid(static_cast<std::size_t>(n) * n);
    parallel_for(grid.size(), options.threads, [&](std::size_t k) {
        const int i = static_cast<int>(k) / n, j = static_cast<int>(k) % n;
        grid[k] = objective(rho_ab, i * dtheta, j * dphi);
    });
    const auto best_it = std::min_element(grid.begin(), grid.end());
    const std::size_t best = static_cast<std::size_t>(best_it - grid.begin());
    double theta = static_cast<int>(best) / n * dtheta;
    double phi = static_cast<int>(best) % n * dphi;
    double value = *best_it;

    // Compass search; the (theta, phi) parameterization is smooth on all of
    // R^2 so no bounds are enforced during refinement.
    double step = dtheta;
    constexpr std::array<std::array<int, 2>, 4> kMoves{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
    while (step >= options.refine_tol) {
        bool moved = false;
        for (const auto& mv : kMoves) {
            const double t = theta + mv[0] * step, p = phi + mv[1] * step;
            const double v = objective(rho_ab, t, p);
            if (v < value) {
                value = v;
                theta = t;
                phi = p;
                moved = true;
                break;
            }
        }
        if (!moved) step /= 2;
    }

    const double s_ab = von_neumann_entropy(rho_ab);
    const double s_a = von_neumann_entropy(partial_trace(rho_ab, Subsystem::B));
    const double s_b = von_neumann_entropy(partial_trace(rho_ab, Subsystem::A));

    DiscordResult out;
    out.optimal_basis.axis = canonicalize({theta, phi});
    out.conditional_entropy_min = value;
    out.mutual_info = std::max(s_a + s_b - s_ab, 0.0);
    out.j_a = s_b - value;
    out.d_a = std::max(value - (s_ab - s_a), 0.0);
    return out;
}

MaskedMoments masked_moments(const std::vector<double>& values, const std::vector<bool>& mask) {
    MaskedMoments m;
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (!mask[i]) {
            sum += values[i];
            ++m.used;
        }
    if (m.used == 0) return m;
    m.mean = sum / static_cast<double>(m.used);
    double var = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (!mask[i]) var += (values[i] - m.mean) * (values[i] - m.mean);
    m.variance = var / static_cast<double>(m.used);
    return m;
}

namespace {

enum Parts { kAlpha = 1, kPhi = 2 };

QuantifierResult quantify(const SeparableStateSpec& spec, const QuantifierOptions& options,
                          int parts) {
    QuantifierResult r;
    r.samples = sample_f_curves(spec, options.beta_grid_n, options.base);
    const std::size_t n = r.samples.size();
    std::vector<double> fa(n), fp(n);
    std::vector<bool> ma(n), mp(n);
    for (std::size_t i = 0; i < n; ++i) {
        fa[i] = r.samples[i].f_alpha;
        fp[i] = r.samples[i].f_phi;
        ma[i] = r.samples[i].alpha_masked;
        mp[i] = r.samples[i].phi_masked;
    }
    if (parts & kAlpha) {
        const MaskedMoments alpha = masked_moments(fa, ma);
        r.delta2_alpha = alpha.variance;
        r.f_alpha_mean = alpha.mean;
        r.alpha_all_masked = alpha.used == 0;
    }
    if (parts & kPhi) {
        const MaskedMoments phi = masked_moments(fp, mp);
        r.delta2_phi = phi.variance;
        r.f_phi_mean = phi.mean;
        r.phi_all_masked = phi.used == 0;
    }
    r.witness = r.delta2_alpha + r.delta2_phi > options.witness_threshold;
    return r;
}

}  // namespace

QuantifierResult delta_alpha(const SeparableStateSpec& spec, const QuantifierOptions& options) {
    return quantify(spec, options, kAlpha);
}

QuantifierResult delta_phi(const SeparableStateSpec& spec, const QuantifierOptions& options) {
    return quantify(spec, options, kPhi);
}

QuantifierResult combined_witness(const SeparableStateSpec& spec,
                                  const QuantifierOptions& options) {
    return quantify(spec, options, kAlpha | kPhi);
}

}  // namespace dscope

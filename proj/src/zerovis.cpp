#include "discord_scope/zerovis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "discord_scope/parallel.hpp"

namespace dscope {

namespace {

constexpr double kGoldenRatio = 0.6180339887498949;
constexpr double kZeroVisibility = 1e-10;
constexpr double kPhaseMatchTol = 1e-6;
constexpr double kVerticalLineMinWeight = 1e-9;
constexpr double kBisectionTol = 1e-12;

// Wrap into (-pi, pi].
double wrap_pm_pi(double x) {
    double r = wrap_two_pi(x);
    return r > kPi ? r - kTwoPi : r;
}

InterferometerConfig with_beta(const InterferometerConfig& base, double beta) {
    InterferometerConfig c = base;
    c.b_bs.mix_angle = beta;
    return c;
}

ConditionedState condition_at(const SeparableStateSpec& spec, const InterferometerConfig& base,
                              double beta) {
    BeamSplitterSetting bs = base.b_bs;
    bs.mix_angle = beta;
    return conditioned_state(spec, bs, base.phi_b);
}

double visibility_at(const SeparableStateSpec& spec, InterferometerConfig config, double alpha,
                     double phi_a) {
    config.a_bs.mix_angle = alpha;
    config.phi_a = phi_a;
    return visibility(spec, config);
}

template <typename Fn>
double golden_section_min(Fn&& f, double lo, double hi, double tol) {
    double x1 = hi - kGoldenRatio * (hi - lo);
    double x2 = lo + kGoldenRatio * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > tol) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kGoldenRatio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kGoldenRatio * (hi - lo);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? x1 : x2;
}

// Bisection for a sign change of g on [lo, hi].
template <typename Fn>
double bisect(Fn&& g, double lo, double hi, double glo) {
    while (hi - lo > kBisectionTol) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (gm == 0.0) return mid;
        if ((gm < 0.0) == (glo < 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Roots of a periodic function sampled on beta_i = 2 pi i / n.
template <typename Fn>
std::vector<double> periodic_roots(Fn&& g, int n, const std::vector<double>& values,
                                   const std::vector<bool>& valid) {
    std::vector<double> roots;
    for (int i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        const auto uj = static_cast<std::size_t>((i + 1) % n);
        if (!valid[ui]) continue;
        const double lo = kTwoPi * i / n;
        if (values[ui] == 0.0) {
            roots.push_back(lo);
            continue;
        }
        if (!valid[uj] || values[uj] == 0.0) continue;
        if ((values[ui] < 0.0) != (values[uj] < 0.0))
            roots.push_back(wrap_two_pi(bisect(g, lo, kTwoPi * (i + 1) / n, values[ui])));
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace

FrameVectors frame_vectors(double alpha, double phi_minus) {
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    const double cp = std::cos(phi_minus), sp = std::sin(phi_minus);
    FrameVectors f;
    f.a1 = {ca * cp, ca * sp, -sa};
    f.a2 = {sp, -cp, 0.0};
    f.a3 = f.a2.cross(f.a1);
    return f;
}

ZeroVisSolution zero_visibility_solve(const ConditionedState& cond, double phi_r, double phi_t) {
    ZeroVisSolution sol;
    if (cond.degenerate) {
        sol.kind = ZeroVisSolution::Kind::DegenerateAllAlpha;
        return sol;
    }
    const double phi_minus = phi_r - phi_t;
    const double vt = cond.vartheta, vp = cond.varphi;
    sol.branches[0] = {Branch::Plus, vt, wrap_two_pi(vp), wrap_two_pi(vp - phi_minus)};
    sol.branches[1] = {Branch::Minus, kPi - vt, wrap_two_pi(vp + kPi),
                       wrap_two_pi(vp + kPi - phi_minus)};
    return sol;
}

BlochVector rotated_resultant(const ConditionedState& cond, double phi_a) {
    return rotate_z(cond.resultant, -phi_a);
}

const char* axis_name(Axis a) {
    switch (a) {
        case Axis::Alpha: return "alpha";
        case Axis::Beta: return "beta";
        case Axis::PhiA: return "phi_a";
        case Axis::PhiB: return "phi_b";
    }
    return "?";
}

std::optional<Axis> parse_axis(std::string_view name) {
    if (name == "alpha") return Axis::Alpha;
    if (name == "beta") return Axis::Beta;
    if (name == "phi_a") return Axis::PhiA;
    if (name == "phi_b") return Axis::PhiB;
    return std::nullopt;
}

void set_axis(InterferometerConfig& config, Axis axis, double value) {
    switch (axis) {
        case Axis::Alpha: config.a_bs.mix_angle = value; break;
        case Axis::Beta: config.b_bs.mix_angle = value; break;
        case Axis::PhiA: config.phi_a = value; break;
        case Axis::PhiB: config.phi_b = value; break;
    }
}

double get_axis(const InterferometerConfig& config, Axis axis) {
    switch (axis) {
        case Axis::Alpha: return config.a_bs.mix_angle;
        case Axis::Beta: return config.b_bs.mix_angle;
        case Axis::PhiA: return config.phi_a;
        case Axis::PhiB: return config.phi_b;
    }
    return 0.0;
}

Landscape sample_landscape(const SeparableStateSpec& spec, const LandscapeRequest& request,
                           int threads) {
    Landscape out;
    out.request = request;
    for (int i = 0; i < request.nx; ++i) out.xs.push_back(kTwoPi * i / request.nx);
    for (int j = 0; j < request.ny; ++j) out.ys.push_back(kTwoPi * j / request.ny);
    out.values.resize(out.xs.size() * out.ys.size());
    const auto nx = static_cast<std::size_t>(request.nx);
    parallel_for(out.values.size(), threads, [&](std::size_t k) {
        InterferometerConfig c = request.base;
        set_axis(c, request.x, out.xs[k % nx]);
        set_axis(c, request.y, out.ys[k / nx]);
        out.values[k] = visibility(spec, c);
    });
    return out;
}

std::vector<double> find_vertical_lines(const SeparableStateSpec& spec,
                                        const InterferometerConfig& base, int beta_samples) {
    const ClassicalityReport report = a_classicality(spec);
    if (!report.is_a_classical || report.grouping.size() != 2) return {};
    std::vector<double> sign(spec.components.size(), 1.0);
    for (std::size_t idx : report.grouping[1]) sign[idx] = -1.0;

    // Signed degeneracy function sum_v (+-) w^B_v: N = s(beta) u.
    auto signed_weight = [&](double beta) {
        const ConditionedState c = condition_at(spec, base, beta);
        double s = 0.0;
        for (std::size_t v = 0; v < c.weights.size(); ++v) s += sign[v] * c.weights[v];
        return s;
    };
    const auto n = static_cast<std::size_t>(beta_samples);
    std::vector<double> values(n);
    std::vector<bool> valid(n, true);
    for (std::size_t i = 0; i < n; ++i) values[i] = signed_weight(kTwoPi * double(i) / double(n));

    std::vector<double> lines;
    for (double beta : periodic_roots(signed_weight, beta_samples, values, valid))
        if (condition_at(spec, base, beta).w_total > kVerticalLineMinWeight) lines.push_back(beta);
    return lines;
}

ZeroLine trace_zero_lines(const SeparableStateSpec& spec, const TraceOptions& options) {
    const int n = options.beta_samples;
    const InterferometerConfig& base = options.base;
    ZeroLine line;
    line.beta.resize(static_cast<std::size_t>(n));
    line.solutions.resize(line.beta.size());
    line.residual.assign(line.beta.size(), 0.0);
    line.alpha0_tracked.assign(line.beta.size(), 0.0);
    line.phi_a0_tracked.assign(line.beta.size(), 0.0);
    line.tracked_valid.assign(line.beta.size(), false);

    std::vector<double> cos_gap(line.beta.size(), 0.0);
    std::vector<bool> gap_valid(line.beta.size(), false);

    bool have_prev = false;
    double prev_alpha = 0.0, prev_phi = 0.0;
    long prev_k = 0;

    for (std::size_t i = 0; i < line.beta.size(); ++i) {
        const double beta = kTwoPi * double(i) / double(n);
        line.beta[i] = beta;
        const InterferometerConfig cfg = with_beta(base, beta);
        const ConditionedState cond = condition_at(spec, base, beta);
        const ZeroVisSolution sol = zero_visibility_solve(cond, base.a_bs.phi_r, base.a_bs.phi_t);
        line.solutions[i] = sol;

        double worst = 0.0;
        if (sol.kind == ZeroVisSolution::Kind::DegenerateAllAlpha) {
            line.degenerate_marks.push_back(i);
            for (int k = 0; k < 4; ++k)
                worst = std::max(worst, visibility_at(spec, cfg, k * kPi / 4, base.phi_a));
        } else {
            for (const ZeroPoint& z : sol.branches)
                worst = std::max(worst, visibility_at(spec, cfg, z.alpha0, z.phi_a0));
            if (options.fixed_alpha) {
                const double nz = cond.unit_direction.z();
                const double ca = std::cos(*options.fixed_alpha);
                cos_gap[i] = ca * ca - nz * nz;
                gap_valid[i] = true;
            }
        }
        line.residual[i] = worst;
        if (!(worst <= options.verify_tol)) {
            ++line.verification_failures;
            if (options.throw_on_failure)
                throw VerificationFailed("claimed zero at beta=" + std::to_string(beta) +
                                         " has visibility " + std::to_string(worst));
        }

        if (sol.kind != ZeroVisSolution::Kind::Generic) continue;

        // Pick the branch to follow.
        const ZeroPoint* chosen = nullptr;
        double best_cost = 0.0;
        for (const ZeroPoint& z : sol.branches) {
            double cost;
            if (options.fixed_phi_a) {
                if (std::abs(wrap_pm_pi(z.phi_a0 - *options.fixed_phi_a)) > kPhaseMatchTol) continue;
                cost = have_prev ? std::abs(wrap_pm_pi(2.0 * (z.alpha0 - prev_alpha)) / 2.0) : 0.0;
            } else {
                cost = have_prev ? std::abs(wrap_pm_pi(2.0 * (z.alpha0 - prev_alpha)) / 2.0) +
                                       std::abs(wrap_pm_pi(z.phi_a0 - prev_phi))
                                 : (z.branch == Branch::Plus ? 0.0 : 1.0);
            }
            if (!chosen || cost < best_cost) {
                chosen = &z;
                best_cost = cost;
            }
        }
        if (!chosen) continue;

        // Unwrap modulo pi against the previous tracked value.
        long k = have_prev ? std::lround((prev_alpha - chosen->alpha0) / kPi) : 0;
        const double a = chosen->alpha0 + double(k) * kPi;
        if (have_prev && k != prev_k) line.jumps.push_back(i);
        line.alpha0_tracked[i] = a;
        line.phi_a0_tracked[i] = chosen->phi_a0;
        line.tracked_valid[i] = true;
        prev_alpha = a;
        prev_phi = chosen->phi_a0;
        prev_k = k;
        have_prev = true;
    }

    line.vertical_lines = find_vertical_lines(spec, base, n);

    if (options.fixed_alpha) {
        const double fa = *options.fixed_alpha;
        const double ca = std::cos(fa);
        auto gap = [&](double beta) {
            const ConditionedState c = condition_at(spec, base, beta);
            const double nz = c.degenerate ? 0.0 : c.unit_direction.z();
            return ca * ca - nz * nz;
        };
        const double fa_mod = std::fmod(wrap_two_pi(fa), kPi);
        for (double beta0 : periodic_roots(gap, n, cos_gap, gap_valid)) {
            const ConditionedState c = condition_at(spec, base, beta0);
            const ZeroVisSolution sol = zero_visibility_solve(c, base.a_bs.phi_r, base.a_bs.phi_t);
            if (sol.kind != ZeroVisSolution::Kind::Generic) continue;
            const ZeroPoint* best = &sol.branches[0];
            auto dist = [fa_mod](const ZeroPoint& z) {
                return std::abs(wrap_pm_pi(2.0 * (z.alpha0 - fa_mod)));
            };
            if (dist(sol.branches[1]) < dist(*best)) best = &sol.branches[1];
            FixedAlphaRoot root{beta0, best->phi_a0, 0.0};
            root.residual = visibility_at(spec, with_beta(base, beta0), fa, best->phi_a0);
            line.fixed_alpha_roots.push_back(root);
        }
    }
    return line;
}

double max_window_excursion(const ZeroLine& line, double window) {
    double best = 0.0;
    const std::size_t n = line.beta.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!line.tracked_valid[i]) continue;
        double lo = line.alpha0_tracked[i], hi = lo;
        for (std::size_t j = i + 1; j < n && line.beta[j] - line.beta[i] <= window; ++j) {
            if (!line.tracked_valid[j]) continue;
            lo = std::min(lo, line.alpha0_tracked[j]);
            hi = std::max(hi, line.alpha0_tracked[j]);
        }
        best = std::max(best, hi - lo);
    }
    return best;
}

NumericZero numeric_alpha_zero(const SeparableStateSpec& spec, const InterferometerConfig& config) {
    auto v = [&](double alpha) { return visibility_at(spec, config, alpha, config.phi_a); };
    constexpr int kScan = 64;
    const double h = kPi / kScan;
    int best = 0;
    double best_v = v(0.0);
    for (int i = 1; i <= kScan; ++i) {
        const double vi = v(i * h);
        if (vi < best_v) {
            best_v = vi;
            best = i;
        }
    }
    const double alpha = golden_section_min(v, (best - 1) * h, (best + 1) * h, 1e-13);
    NumericZero z;
    z.alpha = alpha;
    z.phi_a = config.phi_a;
    z.visibility = v(alpha);
    z.is_zero = z.visibility <= kZeroVisibility;
    return z;
}

NumericZero numeric_zero(const SeparableStateSpec& spec, const InterferometerConfig& config) {
    auto inner = [&](double phi_a) {
        InterferometerConfig c = config;
        c.phi_a = phi_a;
        return numeric_alpha_zero(spec, c);
    };
    constexpr int kScan = 64;
    const double h = kTwoPi / kScan;
    int best = 0;
    double best_v = inner(0.0).visibility;
    for (int i = 1; i < kScan; ++i) {
        const double vi = inner(i * h).visibility;
        if (vi < best_v) {
            best_v = vi;
            best = i;
        }
    }
    const double phi = golden_section_min([&](double p) { return inner(p).visibility; },
                                          (best - 1) * h, (best + 1) * h, 1e-12);
    NumericZero z = inner(phi);
    z.phi_a = wrap_two_pi(phi);
    return z;
}

std::vector<FSample> sample_f_curves(const SeparableStateSpec& spec, int beta_samples,
                                     const InterferometerConfig& base) {
    std::vector<FSample> out(static_cast<std::size_t>(beta_samples));
    for (std::size_t i = 0; i < out.size(); ++i) {
        FSample& s = out[i];
        s.beta = kTwoPi * double(i) / double(beta_samples);
        const ConditionedState cond = condition_at(spec, base, s.beta);
        const BlochVector& nv = cond.resultant;
        s.alpha_masked = cond.degenerate;
        if (!s.alpha_masked) s.f_alpha = nv.z() * nv.z() / nv.squaredNorm();
        const double planar = nv.x() * nv.x() + nv.y() * nv.y();
        s.phi_masked = planar < kPhiMaskTol;
        if (!s.phi_masked) s.f_phi = nv.x() * nv.x() / planar;
    }
    return out;
}

const char* landscape_kind_name(LandscapeClass::Kind k) {
    switch (k) {
        case LandscapeClass::Kind::Barcode: return "barcode";
        case LandscapeClass::Kind::Grid: return "grid";
        case LandscapeClass::Kind::Curved: return "curved";
    }
    return "?";
}

LandscapeClass classify_landscape(const SeparableStateSpec& spec, double tol, int beta_samples,
                                  const InterferometerConfig& base) {
    const std::vector<FSample> f = sample_f_curves(spec, beta_samples, base);
    auto variation = [&f](auto value, auto masked) {
        double sum = 0.0;
        std::size_t used = 0;
        for (const auto& s : f)
            if (!masked(s)) {
                sum += value(s);
                ++used;
            }
        if (used == 0) return 0.0;
        const double mean = sum / double(used);
        double worst = 0.0;
        for (const auto& s : f)
            if (!masked(s)) worst = std::max(worst, std::abs(value(s) - mean));
        return worst;
    };
    LandscapeClass out;
    out.f_alpha_variation = variation([](const FSample& s) { return s.f_alpha; },
                                      [](const FSample& s) { return s.alpha_masked; });
    out.f_phi_variation = variation([](const FSample& s) { return s.f_phi; },
                                    [](const FSample& s) { return s.phi_masked; });
    out.vertical_lines = find_vertical_lines(spec, base, beta_samples);
    if (out.f_alpha_variation > tol || out.f_phi_variation > tol)
        out.kind = LandscapeClass::Kind::Curved;
    else
        out.kind = out.vertical_lines.empty() ? LandscapeClass::Kind::Barcode
                                              : LandscapeClass::Kind::Grid;
    return out;
}

}  // namespace dscope

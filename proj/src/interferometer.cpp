#include "discord_scope/interferometer.hpp"

namespace dscope {

namespace {

constexpr double kZeroMeanTol = 1e-15;

ComplexMat2 loop_phase_matrix(double phase) {
    ComplexMat2 m = ComplexMat2::Zero();
    m(0, 0) = std::polar(1.0, phase / 2);
    m(1, 1) = std::polar(1.0, -phase / 2);
    return m;
}

ComplexMat2 detector_projector(int detector) {
    ComplexMat2 p = ComplexMat2::Zero();
    p(detector, detector) = 1.0;
    return p;
}

// S_d e^{i phi_d sigma_3/2} S_A acting on subsystem A.
ComplexMat2 a_path(const InterferometerConfig& config, double phi_d) {
    return scattering_matrix(config.detector_bs, 0.0) * loop_phase_matrix(phi_d) *
           scattering_matrix(config.a_bs, config.phi_a);
}

}  // namespace

ComplexMat2 scattering_matrix(const BeamSplitterSetting& bs, double loop_phase) {
    const Complex r = bs.r(), t = bs.t();
    ComplexMat2 s;
    s << r, t, -std::conj(t), std::conj(r);
    return s * loop_phase_matrix(loop_phase);
}

double joint_probability(const ComplexMat4& rho_ab, const InterferometerConfig& config,
                         double phi_d, int a_detector, int b_detector) {
    const ComplexMat4 s =
        kron(a_path(config, phi_d), scattering_matrix(config.b_bs, config.phi_b));
    const ComplexMat4 proj = kron(detector_projector(a_detector), detector_projector(b_detector));
    return (proj * s * rho_ab * s.adjoint()).trace().real();
}

double correlation_full(const SeparableStateSpec& spec, const InterferometerConfig& config,
                        double phi_d) {
    return joint_probability(assemble_density(spec), config, phi_d, 0, 0);
}

ConditionedState conditioned_state(const SeparableStateSpec& spec,
                                   const BeamSplitterSetting& b_bs, double phi_b) {
    const ComplexMat2 sb = scattering_matrix(b_bs, phi_b);
    ConditionedState out;
    out.weights.reserve(spec.components.size());
    for (const auto& c : spec.components) {
        // Tr_B[P_B S_B rho^B S_B^dagger] = |<up| S_B |B>|^2
        const Complex amp = (sb * bloch_ket(c.b))(0);
        const double wb = c.weight * std::norm(amp);
        out.weights.push_back(wb);
        out.w_total += wb;
        out.resultant += wb * bloch_vector(c.a);
    }
    out.resultant_norm = out.resultant.norm();
    out.degenerate = out.resultant_norm < kDegeneracyTol;
    if (!out.degenerate) {
        out.unit_direction = out.resultant / out.resultant_norm;
        const BlochAngles ang = bloch_angles(out.unit_direction);
        out.vartheta = ang.theta;
        out.varphi = ang.phi;
    }
    return out;
}

VisibilityCoefficients visibility_coefficients(const ConditionedState& cond,
                                               const InterferometerConfig& config) {
    const ComplexMat2 sa = scattering_matrix(config.a_bs, config.phi_a);
    const ComplexMat2 sd = scattering_matrix(config.detector_bs, 0.0);
    const ComplexMat2 out_state = sa * cond.matrix() * sa.adjoint();
    const ComplexMat2 detector = sd.adjoint() * detector_projector(0) * sd;

    // Tr[D rho~ D^dagger A] with D = diag(e^{i phi_d/2}, e^{-i phi_d/2}):
    // the diagonal terms are phi_d-independent, rho~_01 A_10 carries e^{i phi_d}.
    VisibilityCoefficients vc;
    vc.mean_term =
        (out_state(0, 0) * detector(0, 0) + out_state(1, 1) * detector(1, 1)).real();
    vc.amplitude = out_state(0, 1) * detector(1, 0);
    const double amp = std::abs(vc.amplitude);
    if (vc.mean_term < kZeroMeanTol) {
        if (amp >= kZeroMeanTol)
            throw ZeroMeanTerm("mean term vanishes with nonzero oscillation amplitude");
        vc.mean_term = std::max(vc.mean_term, 0.0);
        vc.visibility = 0.0;
    } else {
        vc.visibility = amp / vc.mean_term;
    }
    return vc;
}

VisibilityCoefficients visibility_coefficients(const SeparableStateSpec& spec,
                                               const InterferometerConfig& config) {
    return visibility_coefficients(conditioned_state(spec, config.b_bs, config.phi_b), config);
}

double visibility(const SeparableStateSpec& spec, const InterferometerConfig& config) {
    return visibility_coefficients(spec, config).visibility;
}

}  // namespace dscope

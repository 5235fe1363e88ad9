#pragma once

// Small dense complex linear algebra for one and two qubits.
//
// Basis ordering is fixed globally as A (x) B with
//   index 0 = |up up>, 1 = |up down>, 2 = |down up>, 3 = |down down>,
// i.e. entry (2i+k, 2j+l) of a two-qubit operator couples A-indices (i, j)
// and B-indices (k, l). Index 0 of a single qubit is |up>.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>

#include "discord_scope/errors.hpp"

namespace dscope {

template <typename Scalar>
using Mat2 = Eigen::Matrix<std::complex<Scalar>, 2, 2>;
template <typename Scalar>
using Mat4 = Eigen::Matrix<std::complex<Scalar>, 4, 4>;
template <typename Scalar>
using Ket2 = Eigen::Matrix<std::complex<Scalar>, 2, 1>;
template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;

using ComplexMat2 = Mat2<double>;
using ComplexMat4 = Mat4<double>;
using Ket = Ket2<double>;
using BlochVector = Vec3<double>;
using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class Subsystem { A, B };

/// Polar/azimuthal angles of a pure qubit state
/// cos(theta/2)|up> + e^{i phi} sin(theta/2)|down>.
struct BlochAngles {
    double theta = 0.0;
    double phi = 0.0;
};

/// Reduce an angle into [0, 2pi).
inline double wrap_two_pi(double x) {
    double r = std::fmod(x, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

/// Map arbitrary (theta, phi) onto theta in [0, pi], phi in [0, 2pi)
/// describing the same ray.
inline BlochAngles canonicalize(BlochAngles a) {
    double t = wrap_two_pi(a.theta);
    double p = a.phi;
    if (t > kPi) {
        t = kTwoPi - t;
        p += kPi;
    }
    return {t, wrap_two_pi(p)};
}

template <typename Scalar = double>
Ket2<Scalar> bloch_ket(const BlochAngles& a) {
    using C = std::complex<Scalar>;
    Ket2<Scalar> k;
    k << C(std::cos(Scalar(a.theta) / 2)),
        std::polar(Scalar(1), Scalar(a.phi)) * std::sin(Scalar(a.theta) / 2);
    return k;
}

template <typename Scalar = double>
Vec3<Scalar> bloch_vector(const BlochAngles& a) {
    const Scalar st = std::sin(Scalar(a.theta));
    return {st * std::cos(Scalar(a.phi)), st * std::sin(Scalar(a.phi)),
            std::cos(Scalar(a.theta))};
}

/// Spherical angles of a nonzero vector; theta in [0, pi], phi in [0, 2pi).
template <typename Scalar>
BlochAngles bloch_angles(const Vec3<Scalar>& n) {
    const double r = static_cast<double>(n.norm());
    if (r == 0.0) return {};
    const double z = std::clamp(static_cast<double>(n.z()) / r, -1.0, 1.0);
    return {std::acos(z), wrap_two_pi(std::atan2(static_cast<double>(n.y()),
                                                 static_cast<double>(n.x())))};
}

template <typename Scalar = double>
std::array<Mat2<Scalar>, 3> pauli() {
    using C = std::complex<Scalar>;
    Mat2<Scalar> x, y, z;
    x << C(0), C(1), C(1), C(0);
    y << C(0), C(0, -1), C(0, 1), C(0);
    z << C(1), C(0), C(0), C(-1);
    return {x, y, z};
}

/// 1/2 (w I + n . sigma); w = 1 gives the density matrix of Bloch vector n.
template <typename Scalar>
Mat2<Scalar> bloch_operator(const Vec3<Scalar>& n, Scalar w = Scalar(1)) {
    using C = std::complex<Scalar>;
    Mat2<Scalar> m;
    m << C((w + n.z()) / 2), C(n.x() / 2, -n.y() / 2), C(n.x() / 2, n.y() / 2),
        C((w - n.z()) / 2);
    return m;
}

/// Inverse of bloch_operator: returns (w, n) with m = 1/2 (w I + n . sigma)
/// for hermitian m.
template <typename Scalar>
std::pair<Scalar, Vec3<Scalar>> bloch_decompose(const Mat2<Scalar>& m) {
    const Scalar w = (m(0, 0) + m(1, 1)).real();
    Vec3<Scalar> n{2 * m(1, 0).real(), 2 * m(1, 0).imag(),
                   (m(0, 0) - m(1, 1)).real()};
    return {w, n};
}

/// |psi><psi| for the Bloch ket.
template <typename Scalar = double>
Mat2<Scalar> bloch_to_density(const BlochAngles& a) {
    const Ket2<Scalar> k = bloch_ket<Scalar>(a);
    return k * k.adjoint();
}

template <typename Scalar>
Mat4<Scalar> kron(const Mat2<Scalar>& a, const Mat2<Scalar>& b) {
    Mat4<Scalar> out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.template block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

template <typename Scalar>
Mat2<Scalar> partial_trace(const Mat4<Scalar>& m, Subsystem traced_out) {
    Mat2<Scalar> out = Mat2<Scalar>::Zero();
    if (traced_out == Subsystem::B) {
        // (rho_A)_{ij} = sum_k m(2i+k, 2j+k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                out(i, j) = m(2 * i, 2 * j) + m(2 * i + 1, 2 * j + 1);
    } else {
        // (rho_B)_{kl} = sum_i m(2i+k, 2i+l)
        for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l) out(k, l) = m(k, l) + m(2 + k, 2 + l);
    }
    return out;
}

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kJacobiOffTol = 1e-14;
inline constexpr double kNegativeEigenClamp = 1e-12;

template <typename Derived>
double hermitian_defect(const Eigen::MatrixBase<Derived>& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

namespace detail {

// Cyclic Jacobi sweeps on a real symmetric matrix; returns its eigenvalues
// unsorted. Converges when the off-diagonal Frobenius norm drops below
// tol * max(1, ||a||_F).
template <typename Scalar, int N>
Eigen::Matrix<Scalar, N, 1> jacobi_eigenvalues(Eigen::Matrix<Scalar, N, N> a,
                                               Scalar tol) {
    const Scalar scale = std::max<Scalar>(Scalar(1), a.norm());
    auto off_norm = [&a] {
        Scalar s = 0;
        for (int p = 0; p < N; ++p)
            for (int q = 0; q < N; ++q)
                if (p != q) s += a(p, q) * a(p, q);
        return std::sqrt(s);
    };
    for (int sweep = 0; sweep < 100 && off_norm() >= tol * scale; ++sweep) {
        for (int p = 0; p < N - 1; ++p) {
            for (int q = p + 1; q < N; ++q) {
                const Scalar apq = a(p, q);
                if (apq == Scalar(0)) continue;
                const Scalar theta = (a(q, q) - a(p, p)) / (2 * apq);
                const Scalar t = (theta >= 0 ? Scalar(1) : Scalar(-1)) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1));
                const Scalar c = 1 / std::sqrt(t * t + 1);
                const Scalar s = t * c;
                for (int k = 0; k < N; ++k) {
                    const Scalar akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < N; ++k) {
                    const Scalar apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    return a.diagonal();
}

template <typename Derived>
void require_hermitian(const Eigen::MatrixBase<Derived>& m) {
    const double defect = hermitian_defect(m);
    if (!(defect <= kHermitianTol))
        throw NonHermitianInput("matrix asymmetry " + std::to_string(defect) +
                                " exceeds tolerance");
}

}  // namespace detail

/// Eigenvalues of a hermitian 2x2 matrix, descending, via trace and
/// determinant.
template <typename Scalar>
std::array<Scalar, 2> hermitian_eigenvalues(const Mat2<Scalar>& m) {
    detail::require_hermitian(m);
    const Scalar a = m(0, 0).real(), d = m(1, 1).real();
    const std::complex<Scalar> b = (m(0, 1) + std::conj(m(1, 0))) / Scalar(2);
    const Scalar half_tr = (a + d) / 2;
    const Scalar disc = std::hypot((a - d) / 2, std::abs(b));
    return {half_tr + disc, half_tr - disc};
}

/// Eigenvalues of a hermitian 4x4 matrix, descending. H = X + iY is embedded
/// as the real symmetric [[X, -Y], [Y, X]], whose spectrum is that of H with
/// every eigenvalue doubled.
template <typename Scalar>
std::array<Scalar, 4> hermitian_eigenvalues(const Mat4<Scalar>& m) {
    detail::require_hermitian(m);
    const Mat4<Scalar> h = (m + m.adjoint()) / Scalar(2);
    Eigen::Matrix<Scalar, 8, 8> embedded;
    embedded << h.real(), -h.imag(), h.imag(), h.real();
    auto ev = detail::jacobi_eigenvalues<Scalar, 8>(embedded, Scalar(kJacobiOffTol));
    std::sort(ev.data(), ev.data() + 8, std::greater<Scalar>());
    return {(ev[0] + ev[1]) / 2, (ev[2] + ev[3]) / 2, (ev[4] + ev[5]) / 2,
            (ev[6] + ev[7]) / 2};
}

/// -sum p log2 p over a spectrum, clamping round-off negatives to zero.
template <typename Scalar, std::size_t N>
Scalar entropy_of_spectrum(const std::array<Scalar, N>& ev) {
    Scalar s = 0;
    for (Scalar p : ev) {
        if (p < -Scalar(kNegativeEigenClamp))
            throw InvalidDensityMatrix("eigenvalue " + std::to_string(double(p)) +
                                       " below clamp window");
        p = std::clamp(p, Scalar(0), Scalar(1));
        if (p > 0) s -= p * std::log2(p);
    }
    return std::max(s, Scalar(0));
}

/// Von Neumann entropy in bits.
template <typename Derived>
typename Derived::RealScalar von_neumann_entropy(const Eigen::MatrixBase<Derived>& rho) {
    using Scalar = typename Derived::RealScalar;
    static_assert(Derived::RowsAtCompileTime == 2 || Derived::RowsAtCompileTime == 4,
                  "one- or two-qubit density matrices only");
    if constexpr (Derived::RowsAtCompileTime == 2) {
        const Mat2<Scalar> m = rho;
        return entropy_of_spectrum(hermitian_eigenvalues(m));
    } else {
        const Mat4<Scalar> m = rho;
        return entropy_of_spectrum(hermitian_eigenvalues(m));
    }
}

/// Rotation of a Bloch vector about z by `angle`.
inline BlochVector rotate_z(const BlochVector& n, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * n.x() - s * n.y(), s * n.x() + c * n.y(), n.z()};
}

}  // namespace dscope

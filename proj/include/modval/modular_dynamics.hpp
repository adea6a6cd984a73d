#pragma once

// Exact action of the modular valued operator V_m = (1 - A_w) 1 + A_w S on a
// continuous pointer, and a brute-force joint-space reference that never
// touches the weak value.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "modval/errors.hpp"
#include "modval/pointer_grid.hpp"
#include "modval/quantum_core.hpp"

namespace modval {

inline constexpr double kDegenerateNorm = 1e-12;

struct ModularPointerResult {
    PointerState state;  // normalized |Phi>, carrying exp(i chi)
    double M;            // closed-form normalization
    double chi;
    Complex weak_value;
    double gamma;
    double interference_coefficient;  // 2 Re[A_w (1 - A_w*)]
    PointerState zero;                // |phi>
    PointerState one;                 // S|phi>
};

/// M^2 = 1 - 2 Re A_w + 2|A_w|^2 + A_w (1 - A_w*) s + A_w* (1 - A_w) s*, where
/// s = <phi|S|phi> and s* = <phi|S^dagger|phi>.
inline double normalization_squared(Complex aw, Complex s) {
    const Complex one_minus = 1.0 - aw;
    const Complex cross = aw * std::conj(one_minus) * s + std::conj(aw) * one_minus * std::conj(s);
    return 1.0 - 2.0 * aw.real() + 2.0 * std::norm(aw) + cross.real();
}

inline double interference_coefficient(Complex aw) { return 2.0 * (aw * (1.0 - std::conj(aw))).real(); }

inline ModularPointerResult apply_modular_operator(const PpsEnsemble& ens, const Projector& A,
                                                   const PointerState& phi, double gamma) {
    const Complex aw = weak_value(ens, A).value;
    PointerState shifted = translate(phi, gamma);
    const Complex s = overlap(phi, shifted);

    const double m2 = normalization_squared(aw, s);
    if (!(m2 >= kDegenerateNorm * kDegenerateNorm)) {
        throw DegenerateNorm("complete destructive interference: M^2 = " + detail::num(m2) +
                             " (A_w = " + detail::num(aw.real()) + " + " + detail::num(aw.imag()) +
                             "i, <phi|S|phi> = " + detail::num(s.real()) + " + " + detail::num(s.imag()) +
                             "i)");
    }
    const double M = std::sqrt(m2);
    const double chi = ens.pancharatnam_phase();
    const Complex a0 = std::polar(1.0 / M, chi) * (1.0 - aw);
    const Complex a1 = std::polar(1.0 / M, chi) * aw;

    std::vector<Complex> out(phi.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = a0 * phi[k] + a1 * shifted[k];

    return ModularPointerResult{PointerState(phi.grid(), std::move(out)),
                                M,
                                chi,
                                aw,
                                gamma,
                                interference_coefficient(aw),
                                phi,
                                std::move(shifted)};
}

/// Phi^2(q) = (1/M^2){|1-A_w|^2 phi(q)^2 + |A_w|^2 phi(q-gamma)^2
///                     + 2 Re[A_w(1-A_w*)] phi(q) phi(q-gamma)}.
/// The cross term uses Re[(1-A_w)* A_w conj(phi(q)) phi(q-gamma)] so complex
/// pointers are handled too; for real phi it reduces to the form above.
inline std::vector<double> spatial_profile(const ModularPointerResult& r) {
    const Complex aw = r.weak_value;
    const double w0 = std::norm(1.0 - aw);
    const double w1 = std::norm(aw);
    const Complex c = std::conj(1.0 - aw) * aw;
    const double inv_m2 = 1.0 / (r.M * r.M);
    std::vector<double> profile(r.zero.size());
    for (std::size_t k = 0; k < profile.size(); ++k) {
        const Complex z = r.zero[k];
        const Complex o = r.one[k];
        profile[k] = inv_m2 * (w0 * std::norm(z) + w1 * std::norm(o) + 2.0 * (c * std::conj(z) * o).real());
    }
    return profile;
}

enum class OracleMode {
    Spectral,       // eigenvalue-lambda components shifted spectrally by lambda * gamma
    StrictTrotter,  // central-difference momentum, symmetric even/odd bond splitting
};

struct OracleOptions {
    OracleMode mode = OracleMode::Spectral;
    int steps = 2048;
    std::size_t max_joint_dim = std::size_t{1} << 22;
};

namespace detail {

// exp(-i t P) for the periodic central-difference momentum
// (P f)_k = -i (f_{k+1} - f_{k-1}) / (2 dq), written as a sum of commuting
// two-site bond terms. Each bond (k, k+1) is sigma_y / (2 dq); its exponential
// is a real rotation by t / (2 dq). Even and odd bonds are applied in a
// symmetric (Strang) splitting.
inline void central_difference_evolve(std::vector<Complex>& f, double dq, double t, int steps) {
    const std::size_t n = f.size();
    const double theta = t / (static_cast<double>(steps) * 2.0 * dq);
    auto sweep = [&](std::size_t first, double angle) {
        const double c = std::cos(angle);
        const double s = std::sin(angle);
        for (std::size_t i = first; i < n; i += 2) {
            const std::size_t j = (i + 1) % n;
            const Complex a = f[i];
            const Complex b = f[j];
            f[i] = c * a - s * b;
            f[j] = s * a + c * b;
        }
    };
    for (int step = 0; step < steps; ++step) {
        sweep(0, 0.5 * theta);
        sweep(1, theta);
        sweep(0, 0.5 * theta);
    }
}

}  // namespace detail

/// Brute-force pointer state <psi_f| exp(-i gamma A (x) p) |psi_i>|phi>, normalized.
/// The coupling is exponentiated through the eigendecomposition of A on the
/// explicit joint (system x grid) state; the weak value is never formed.
inline PointerState joint_space_oracle(const PpsEnsemble& ens, const Projector& A, const PointerState& phi,
                                       double gamma, const OracleOptions& opts = {}) {
    const std::size_t d = ens.dim();
    const std::size_t n = phi.size();
    const Grid& grid = phi.grid();
    if (A.dim() != d) throw DimensionMismatch("projector and ensemble dimensions differ");
    if (d * n > opts.max_joint_dim) {
        throw ResourceLimit("joint dimension " + std::to_string(d * n) + " exceeds the cap " +
                            std::to_string(opts.max_joint_dim));
    }
    if (opts.mode == OracleMode::StrictTrotter) {
        if (opts.steps < 1) throw InvalidArgument("oracle needs at least one step");
        if (n % 2 != 0) throw InvalidArgument("strict oracle needs an even number of grid points");
    }

    using Mat = Eigen::MatrixXcd;
    using Vec = Eigen::VectorXcd;
    Mat a(d, d);
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) a(r, c) = A(r, c);
    const Eigen::SelfAdjointEigenSolver<Mat> eig(a);
    const Mat& u = eig.eigenvectors();
    const Eigen::VectorXd& lambda = eig.eigenvalues();

    Vec psi_i(d), psi_f(d);
    for (std::size_t k = 0; k < d; ++k) {
        psi_i(k) = ens.psi_i()[k];
        psi_f(k) = ens.psi_f()[k];
    }
    const Vec ci = u.adjoint() * psi_i;  // joint state components in the eigenbasis of A
    const Vec cf = u.adjoint() * psi_f;

    std::vector<Complex> projected(n, Complex{0.0, 0.0});
    std::vector<Complex> component(n);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t k = 0; k < n; ++k) component[k] = ci(j) * phi[k];
        const double shift = lambda(j) * gamma;
        if (opts.mode == OracleMode::Spectral) {
            detail::check_wraparound(phi.amplitudes(), grid, shift);
            component = detail::spectral_shift(component, grid, shift);
        } else {
            detail::central_difference_evolve(component, grid.dq(), shift, opts.steps);
        }
        const Complex weight = std::conj(cf(j));
        for (std::size_t k = 0; k < n; ++k) projected[k] += weight * component[k];
    }

    const double norm2 = discrete_norm_squared(projected, grid.dq());
    if (!(norm2 > kDegenerateNorm * kDegenerateNorm)) {
        throw DegenerateNorm("post-selected joint state vanishes (norm^2 = " + detail::num(norm2) + ")");
    }
    return PointerState::normalized(grid, std::move(projected));
}

struct PersistenceRow {
    double gamma;
    double centroid;
    double M;
    double interference_coefficient;
};

/// One row per gamma, in input order.
inline std::vector<PersistenceRow> persistence_scan(const PpsEnsemble& ens, const Projector& A,
                                                    const PointerState& phi, std::span<const double> gammas) {
    std::vector<PersistenceRow> rows;
    rows.reserve(gammas.size());
    for (const double g : gammas) {
        const auto r = apply_modular_operator(ens, A, phi, g);
        rows.push_back({g, centroid(r.state), r.M, r.interference_coefficient});
    }
    return rows;
}

}  // namespace modval

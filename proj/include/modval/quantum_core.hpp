#pragma once

// Finite-dimensional pre/post-selected systems: states, projectors, weak
// values, modular values and the Pancharatnam phase of a PPS ensemble.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "modval/errors.hpp"

namespace modval {

using Complex = std::complex<double>;

inline constexpr double kDefaultOverlapFloor = 1e-10;

/// Inner product <a|b>, conjugating the first argument.
inline Complex inner_product(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) {
        throw DimensionMismatch("inner product of vectors of dimension " + std::to_string(a.size()) +
                                " and " + std::to_string(b.size()));
    }
    Complex acc{0.0, 0.0};
    for (std::size_t k = 0; k < a.size(); ++k) acc += std::conj(a[k]) * b[k];
    return acc;
}

/// Maps an angle onto the principal branch (-pi, pi].
inline double principal_angle(double theta) {
    double wrapped = std::remainder(theta, 2.0 * std::numbers::pi);
    if (wrapped <= -std::numbers::pi) wrapped += 2.0 * std::numbers::pi;
    return wrapped;
}

/// Normalized pure state of a finite-dimensional system (dim >= 2).
class SystemState {
public:
    static constexpr double kNormTolerance = 1e-12;

    explicit SystemState(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)) {
        check_dim(amplitudes_.size());
        const double norm2 = std::real(inner_product(amplitudes_, amplitudes_));
        if (std::abs(norm2 - 1.0) > kNormTolerance) {
            throw InvalidArgument("state is not normalized (sum |a_k|^2 = " + detail::num(norm2) + ")");
        }
    }

    /// Rescales `amplitudes` to unit norm. Throws on the zero vector.
    static SystemState normalized(std::vector<Complex> amplitudes) {
        check_dim(amplitudes.size());
        const double norm = std::sqrt(std::real(inner_product(amplitudes, amplitudes)));
        if (!(norm > 0.0) || !std::isfinite(norm)) {
            throw InvalidArgument("cannot normalize a zero or non-finite state vector");
        }
        for (auto& a : amplitudes) a /= norm;
        return SystemState(std::move(amplitudes));
    }

    static SystemState basis(std::size_t dim, std::size_t index) {
        check_dim(dim);
        if (index >= dim) throw InvalidArgument("basis index out of range");
        std::vector<Complex> a(dim, Complex{0.0, 0.0});
        a[index] = 1.0;
        return SystemState(std::move(a));
    }

    std::size_t dim() const noexcept { return amplitudes_.size(); }
    std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
    Complex operator[](std::size_t k) const { return amplitudes_[k]; }

    /// Same ray, multiplied by the unit-modulus factor exp(i theta).
    SystemState with_phase(double theta) const {
        const Complex factor = std::polar(1.0, theta);
        std::vector<Complex> a(amplitudes_);
        for (auto& x : a) x *= factor;
        return SystemState(std::move(a));
    }

private:
    static void check_dim(std::size_t dim) {
        if (dim < 2) throw InvalidArgument("system dimension must be at least 2");
    }

    std::vector<Complex> amplitudes_;
};

inline Complex inner_product(const SystemState& a, const SystemState& b) {
    return inner_product(a.amplitudes(), b.amplitudes());
}

/// Hermitian idempotent matrix, stored densely in row-major order.
class Projector {
public:
    static constexpr double kHermitianTolerance = 1e-12;
    static constexpr double kIdempotentTolerance = 1e-10;

    Projector(std::size_t dim, std::vector<Complex> row_major) : dim_(dim), m_(std::move(row_major)) {
        if (dim_ < 2) throw InvalidArgument("projector dimension must be at least 2");
        if (m_.size() != dim_ * dim_) {
            throw DimensionMismatch("projector needs " + std::to_string(dim_ * dim_) + " entries, got " +
                                    std::to_string(m_.size()));
        }
        for (std::size_t r = 0; r < dim_; ++r) {
            for (std::size_t c = 0; c < dim_; ++c) {
                if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > kHermitianTolerance) {
                    throw InvalidArgument("projector is not Hermitian at (" + std::to_string(r) + ", " +
                                          std::to_string(c) + ")");
                }
            }
        }
        for (std::size_t r = 0; r < dim_; ++r) {
            for (std::size_t c = 0; c < dim_; ++c) {
                Complex sq{0.0, 0.0};
                for (std::size_t k = 0; k < dim_; ++k) sq += (*this)(r, k) * (*this)(k, c);
                if (std::abs(sq - (*this)(r, c)) > kIdempotentTolerance) {
                    throw InvalidArgument("projector is not idempotent at (" + std::to_string(r) + ", " +
                                          std::to_string(c) + ")");
                }
            }
        }
    }

    /// |v><v| for a normalized v.
    static Projector rank_one(const SystemState& v) {
        const std::size_t d = v.dim();
        std::vector<Complex> m(d * d);
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c) m[r * d + c] = v[r] * std::conj(v[c]);
        return Projector(d, std::move(m));
    }

    static Projector onto_basis(std::size_t dim, std::size_t index) {
        return rank_one(SystemState::basis(dim, index));
    }

    std::size_t dim() const noexcept { return dim_; }
    Complex operator()(std::size_t r, std::size_t c) const { return m_[r * dim_ + c]; }
    std::span<const Complex> matrix() const noexcept { return m_; }

    std::vector<Complex> apply(std::span<const Complex> v) const {
        if (v.size() != dim_) throw DimensionMismatch("projector/vector dimension mismatch");
        std::vector<Complex> out(dim_, Complex{0.0, 0.0});
        for (std::size_t r = 0; r < dim_; ++r)
            for (std::size_t c = 0; c < dim_; ++c) out[r] += (*this)(r, c) * v[c];
        return out;
    }

private:
    std::size_t dim_;
    std::vector<Complex> m_;
};

/// Pre-selected state, post-selected state and their overlap <psi_f|psi_i>.
/// Construction fails with OverlapTooSmall when the post-selection is
/// (numerically) orthogonal to the pre-selection.
class PpsEnsemble {
public:
    PpsEnsemble(SystemState psi_i, SystemState psi_f, double overlap_floor = kDefaultOverlapFloor)
        : psi_i_(std::move(psi_i)), psi_f_(std::move(psi_f)), floor_(overlap_floor) {
        if (psi_i_.dim() != psi_f_.dim()) {
            throw DimensionMismatch("pre-selection has dimension " + std::to_string(psi_i_.dim()) +
                                    ", post-selection " + std::to_string(psi_f_.dim()));
        }
        overlap_ = inner_product(psi_f_, psi_i_);
        if (!(std::abs(overlap_) >= floor_)) {
            throw OverlapTooSmall("|<psi_f|psi_i>| = " + detail::num(std::abs(overlap_)) +
                                  " is below the floor " + detail::num(floor_) +
                                  "; the weak value diverges");
        }
        chi_ = principal_angle(std::arg(overlap_));
    }

    const SystemState& psi_i() const noexcept { return psi_i_; }
    const SystemState& psi_f() const noexcept { return psi_f_; }
    std::size_t dim() const noexcept { return psi_i_.dim(); }
    Complex overlap() const noexcept { return overlap_; }
    double overlap_floor() const noexcept { return floor_; }
    /// chi with exp(i chi) = overlap/|overlap|, on (-pi, pi].
    double pancharatnam_phase() const noexcept { return chi_; }

private:
    SystemState psi_i_;
    SystemState psi_f_;
    double floor_;
    Complex overlap_;
    double chi_;
};

inline double pancharatnam_phase(const PpsEnsemble& ens) { return ens.pancharatnam_phase(); }

struct WeakValue {
    Complex value;
};

struct ModularValue {
    Complex value;
    double gamma;
    double hbar;
};

/// <psi_f|A|psi_i>
inline Complex transition_element(const PpsEnsemble& ens, const Projector& A) {
    if (A.dim() != ens.dim()) {
        throw DimensionMismatch("projector dimension " + std::to_string(A.dim()) + " vs system dimension " +
                                std::to_string(ens.dim()));
    }
    return inner_product(ens.psi_f().amplitudes(), A.apply(ens.psi_i().amplitudes()));
}

inline WeakValue weak_value(const PpsEnsemble& ens, const Projector& A) {
    return {transition_element(ens, A) / ens.overlap()};
}

namespace detail {
// exp(-i theta) - 1 without cancellation for small theta.
inline Complex expm1_neg_i(double theta) {
    const double s = std::sin(0.5 * theta);
    return {-2.0 * s * s, -std::sin(theta)};
}
}  // namespace detail

/// (A)_m = <psi_f|exp(-i gamma A / hbar)|psi_i> / <psi_f|psi_i>, evaluated with
/// exp(-i gamma A / hbar) = 1 + (exp(-i gamma / hbar) - 1) A, valid for projectors.
inline ModularValue modular_value(const PpsEnsemble& ens, const Projector& A, double gamma, double hbar = 1.0) {
    if (!(hbar > 0.0)) throw InvalidArgument("hbar must be positive");
    const Complex aw = weak_value(ens, A).value;
    return {1.0 + detail::expm1_neg_i(gamma / hbar) * aw, gamma, hbar};
}

/// i hbar times the central difference of (A)_m at gamma = 0. Approximates
/// the weak value with O(h^2) error.
inline Complex weak_from_modular_derivative(const PpsEnsemble& ens, const Projector& A, double hbar, double h) {
    if (!(h > 0.0)) throw InvalidArgument("finite-difference step must be positive");
    const Complex plus = modular_value(ens, A, h, hbar).value;
    const Complex minus = modular_value(ens, A, -h, hbar).value;
    return Complex{0.0, hbar} * (plus - minus) / (2.0 * h);
}

}  // namespace modval

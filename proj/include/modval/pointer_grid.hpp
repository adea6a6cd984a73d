#pragma once

// Continuous pointer states sampled on a uniform periodic position grid.
// All integrals are Riemann sums with weight dq.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "modval/errors.hpp"
#include "modval/fft.hpp"
#include "modval/quantum_core.hpp"

namespace modval {

class Grid {
public:
    static constexpr std::size_t kMinPoints = 16;
    static constexpr std::size_t kDefaultPoints = 1024;

    Grid(double q_min, double q_max, std::size_t n) : q_min_(q_min), q_max_(q_max), n_(n) {
        if (!std::isfinite(q_min) || !std::isfinite(q_max) || !(q_max > q_min)) {
            throw InvalidArgument("grid requires finite q_max > q_min");
        }
        if (n < kMinPoints) throw InvalidArgument("grid requires at least 16 points");
    }

    /// [-16 sigma + min(0, gamma_lo), 16 sigma + max(0, gamma_hi)], wide enough
    /// that a Gaussian of width sigma can be shifted anywhere in [gamma_lo, gamma_hi].
    static Grid for_shifts(double sigma, double gamma_lo, double gamma_hi, std::size_t n = kDefaultPoints) {
        if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
        return Grid(-16.0 * sigma + std::min(0.0, gamma_lo), 16.0 * sigma + std::max(0.0, gamma_hi), n);
    }

    double q_min() const noexcept { return q_min_; }
    double q_max() const noexcept { return q_max_; }
    std::size_t size() const noexcept { return n_; }
    double length() const noexcept { return q_max_ - q_min_; }
    double dq() const noexcept { return length() / static_cast<double>(n_); }
    double q(std::size_t k) const noexcept { return q_min_ + static_cast<double>(k) * dq(); }

    /// Momentum of DFT bin m, 2 pi k / (n dq) with k in [-n/2, n/2).
    double momentum(std::size_t m) const noexcept {
        return 2.0 * std::numbers::pi * static_cast<double>(fft::signed_frequency(m, n_)) / length();
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    double q_min_;
    double q_max_;
    std::size_t n_;
};

inline double discrete_norm_squared(std::span<const Complex> amps, double dq) {
    double acc = 0.0;
    for (const auto& a : amps) acc += std::norm(a);
    return acc * dq;
}

/// Pointer wavefunction on a grid with unit discrete norm.
class PointerState {
public:
    static constexpr double kNormTolerance = 1e-10;

    PointerState(Grid grid, std::vector<Complex> amplitudes) : grid_(grid), amps_(std::move(amplitudes)) {
        if (amps_.size() != grid_.size()) {
            throw DimensionMismatch("pointer has " + std::to_string(amps_.size()) + " samples for a grid of " +
                                    std::to_string(grid_.size()));
        }
        const double norm2 = discrete_norm_squared(amps_, grid_.dq());
        if (std::abs(norm2 - 1.0) > kNormTolerance) {
            throw InvalidArgument("pointer state is not normalized (norm^2 = " + detail::num(norm2) + ")");
        }
    }

    static PointerState normalized(Grid grid, std::vector<Complex> amplitudes) {
        if (amplitudes.size() != grid.size()) throw DimensionMismatch("pointer sample count does not match grid");
        const double norm = std::sqrt(discrete_norm_squared(amplitudes, grid.dq()));
        if (!(norm > 0.0) || !std::isfinite(norm)) throw InvalidArgument("cannot normalize a zero pointer state");
        for (auto& a : amplitudes) a /= norm;
        return PointerState(grid, std::move(amplitudes));
    }

    const Grid& grid() const noexcept { return grid_; }
    std::span<const Complex> amplitudes() const noexcept { return amps_; }
    std::size_t size() const noexcept { return amps_.size(); }
    Complex operator[](std::size_t k) const { return amps_[k]; }

    double norm_squared() const { return discrete_norm_squared(amps_, grid_.dq()); }

    std::vector<double> density() const {
        std::vector<double> rho(amps_.size());
        std::transform(amps_.begin(), amps_.end(), rho.begin(), [](Complex a) { return std::norm(a); });
        return rho;
    }

private:
    Grid grid_;
    std::vector<Complex> amps_;
};

/// Samples a real profile f(q), which must satisfy f(q) = f(-q), and normalizes it.
inline PointerState pointer_from_profile(const Grid& grid, const std::function<double(double)>& f,
                                         double symmetry_tolerance = 1e-10) {
    std::vector<Complex> amps(grid.size());
    double scale = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double q = grid.q(k);
        const double v = f(q);
        if (!std::isfinite(v)) throw InvalidArgument("pointer profile is not finite at q = " + detail::num(q));
        scale = std::max(scale, std::abs(v));
        amps[k] = v;
    }
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double q = grid.q(k);
        if (std::abs(f(q) - f(-q)) > symmetry_tolerance * std::max(scale, 1e-300)) {
            throw InvalidArgument("pointer profile is not symmetric about q = 0 (checked at q = " +
                                  detail::num(q) + ")");
        }
    }
    return PointerState::normalized(grid, std::move(amps));
}

/// phi(q) = (2 pi sigma^2)^(-1/4) exp(-q^2 / 4 sigma^2), renormalized on the grid.
/// The grid must cover [-8 sigma, 8 sigma].
inline PointerState gaussian_pointer(const Grid& grid, double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidArgument("sigma must be positive");
    if (grid.q_min() > -8.0 * sigma || grid.q_max() < 8.0 * sigma) {
        const double lost = 0.5 * std::erfc(-grid.q_min() / (sigma * std::numbers::sqrt2)) +
                            0.5 * std::erfc(grid.q_max() / (sigma * std::numbers::sqrt2));
        throw GridTooNarrow("grid [" + detail::num(grid.q_min()) + ", " + detail::num(grid.q_max()) +
                            "] does not span +-8 sigma (sigma = " + detail::num(sigma) +
                            "); truncated mass " + detail::num(lost));
    }
    const double amp0 = std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25);
    std::vector<Complex> amps(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double q = grid.q(k);
        amps[k] = amp0 * std::exp(-q * q / (4.0 * sigma * sigma));
    }
    return PointerState::normalized(grid, std::move(amps));
}

inline constexpr double kWraparoundMass = 1e-10;

namespace detail {

// Probability mass that a shift by gamma would carry across the periodic boundary.
inline double wraparound_mass(std::span<const Complex> amps, const Grid& grid, double gamma) {
    double mass = 0.0;
    for (std::size_t k = 0; k < amps.size(); ++k) {
        const double target = grid.q(k) + gamma;
        if (target < grid.q_min() || target >= grid.q_max()) mass += std::norm(amps[k]);
    }
    return mass * grid.dq();
}

inline void check_wraparound(std::span<const Complex> amps, const Grid& grid, double gamma) {
    if (!(std::abs(gamma) < 0.5 * grid.length())) {
        throw WraparoundRisk("|gamma| = " + detail::num(std::abs(gamma)) +
                             " is not below half the grid length " + detail::num(0.5 * grid.length()));
    }
    const double mass = wraparound_mass(amps, grid, gamma);
    if (mass > kWraparoundMass) {
        throw WraparoundRisk("shift by " + detail::num(gamma) + " carries mass " + detail::num(mass) +
                             " across the grid boundary");
    }
}

// f(q) -> f(q - gamma) by multiplying DFT bin m with exp(-i p_m gamma).
inline std::vector<Complex> spectral_shift(std::span<const Complex> amps, const Grid& grid, double gamma) {
    std::vector<Complex> work(amps.begin(), amps.end());
    fft::forward<double>(work);
    for (std::size_t m = 0; m < work.size(); ++m) work[m] *= std::polar(1.0, -grid.momentum(m) * gamma);
    fft::inverse<double>(work);
    return work;
}

inline void require_same_grid(const Grid& a, const Grid& b) {
    if (!(a == b)) throw GridMismatch("pointer states live on different grids");
}

}  // namespace detail

/// S|phi>, i.e. q -> phi(q - gamma), via a spectral (Fourier) shift.
inline PointerState translate(const PointerState& phi, double gamma) {
    detail::check_wraparound(phi.amplitudes(), phi.grid(), gamma);
    return PointerState(phi.grid(), detail::spectral_shift(phi.amplitudes(), phi.grid(), gamma));
}

inline Complex overlap(const PointerState& a, const PointerState& b) {
    detail::require_same_grid(a.grid(), b.grid());
    return inner_product(a.amplitudes(), b.amplitudes()) * a.grid().dq();
}

/// |<a|b>|, the fidelity between two pure pointer states.
inline double fidelity(const PointerState& a, const PointerState& b) { return std::abs(overlap(a, b)); }

inline double centroid(const PointerState& phi) {
    double acc = 0.0;
    for (std::size_t k = 0; k < phi.size(); ++k) acc += phi.grid().q(k) * std::norm(phi[k]);
    return acc * phi.grid().dq();
}

/// Centroid of a sampled density, normalized by its own integral.
inline double centroid(std::span<const double> density, const Grid& grid) {
    if (density.size() != grid.size()) throw DimensionMismatch("density sample count does not match grid");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < density.size(); ++k) {
        num += grid.q(k) * density[k];
        den += density[k];
    }
    if (!(den > 0.0)) throw InvalidArgument("density integrates to zero");
    return num / den;
}

}  // namespace modval

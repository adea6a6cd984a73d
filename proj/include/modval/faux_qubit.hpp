#pragma once

// Faux-qubit view of the post-selected pointer: |0~> = |phi>, |1~> = S|phi>,
// and ensemble readout of a real weak value from the two-peak profile.

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "modval/errors.hpp"
#include "modval/pointer_grid.hpp"

namespace modval {

struct FauxBasis {
    PointerState zero;
    PointerState one;
    double gamma;
    Complex overlap_01;  // <0~|1~> = <phi|S|phi>
};

inline FauxBasis faux_basis(const PointerState& phi, double gamma) {
    PointerState one = translate(phi, gamma);
    const Complex ov = overlap(phi, one);
    return FauxBasis{phi, std::move(one), gamma, ov};
}

struct OrthogonalityRow {
    double gamma;
    double abs_overlap;
};

inline std::vector<OrthogonalityRow> orthogonality_scan(const PointerState& phi, std::span<const double> gammas) {
    std::vector<OrthogonalityRow> rows;
    rows.reserve(gammas.size());
    for (const double g : gammas) rows.push_back({g, std::abs(faux_basis(phi, g).overlap_01)});
    return rows;
}

struct ReadoutOptions {
    double min_separation = 4.0;  // |gamma| / sigma below this: InterferenceTooLarge
    double peak_floor = 1e-12;
};

/// Which faux component has no peak of its own in the profile.
enum class MissingPeak { None, Zero, One };

struct ReadoutEstimate {
    double peak_ratio;                      // peak(|1~> side) / peak(|0~> side)
    double candidate;                       // +sqrt(r) / (1 + sqrt(r))
    std::optional<double> alt_candidate;    // -sqrt(r) / (1 - sqrt(r)), absent when sqrt(r) = 1
    double interference_bound;              // exp(-gamma^2 / 8 sigma^2)
    double zero_peak;
    double one_peak;
    double zero_peak_q;
    double one_peak_q;
    MissingPeak missing = MissingPeak::None;  // set for the degenerate A_w in {0, 1} estimate

    bool degenerate() const noexcept { return missing != MissingPeak::None; }
};

namespace detail {

struct Peak {
    double value = 0.0;
    std::size_t index = 0;
    bool found = false;
};

// Largest local maximum strictly inside the index range [lo, hi]. A half-line
// whose maximum sits on its edge is a tail of the other peak, not a peak.
inline Peak interior_peak(std::span<const double> p, std::size_t lo, std::size_t hi, double floor) {
    Peak best;
    if (hi < lo + 2) return best;
    for (std::size_t k = lo + 1; k < hi; ++k) {
        if (p[k] >= p[k - 1] && p[k] >= p[k + 1] && p[k] > floor && (!best.found || p[k] > best.value)) {
            best = {p[k], k, true};
        }
    }
    return best;
}

}  // namespace detail

/// Reads a real weak value from a faux-qubit profile. The profile is split at
/// q = gamma/2; the |0~> peak lives on the side containing q = 0, the |1~> peak
/// on the side containing q = gamma. Both real solutions of
/// |A_w / (1 - A_w)| = sqrt(peak_ratio) are returned.
inline ReadoutEstimate read_faux_qubit(std::span<const double> profile, const Grid& grid, double gamma,
                                       double sigma, const ReadoutOptions& opts = {}) {
    if (profile.size() != grid.size()) throw DimensionMismatch("profile sample count does not match grid");
    if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
    if (!(std::abs(gamma) / sigma >= opts.min_separation)) {
        throw InterferenceTooLarge("gamma/sigma = " + detail::num(std::abs(gamma) / sigma) +
                                   " is below " + detail::num(opts.min_separation) +
                                   "; the two-peak approximation does not hold");
    }

    const double split = 0.5 * gamma;
    std::size_t first_right = 0;
    while (first_right < grid.size() && grid.q(first_right) <= split) ++first_right;
    std::size_t last_left = first_right;
    while (last_left > 0 && grid.q(last_left - 1) >= split) --last_left;
    if (last_left == 0 || first_right >= grid.size()) {
        throw InvalidArgument("q = gamma/2 does not split the grid into two half-lines");
    }
    --last_left;  // last index with q < gamma/2

    const detail::Peak left = detail::interior_peak(profile, 0, last_left, opts.peak_floor);
    const detail::Peak right = detail::interior_peak(profile, first_right, grid.size() - 1, opts.peak_floor);
    const detail::Peak& zero = gamma > 0.0 ? left : right;
    const detail::Peak& one = gamma > 0.0 ? right : left;

    ReadoutEstimate est{};
    est.interference_bound = std::exp(-gamma * gamma / (8.0 * sigma * sigma));
    est.zero_peak = zero.value;
    est.one_peak = one.value;
    est.zero_peak_q = zero.found ? grid.q(zero.index) : std::numeric_limits<double>::quiet_NaN();
    est.one_peak_q = one.found ? grid.q(one.index) : std::numeric_limits<double>::quiet_NaN();

    if (!zero.found && !one.found) {
        throw PeakNotFound("neither half-line of the profile has a peak above " + detail::num(opts.peak_floor));
    }
    if (!zero.found) {
        est.missing = MissingPeak::Zero;
        est.peak_ratio = std::numeric_limits<double>::infinity();
        est.candidate = 1.0;
        est.alt_candidate = 1.0;
        return est;
    }
    if (!one.found) {
        est.missing = MissingPeak::One;
        est.peak_ratio = 0.0;
        est.candidate = 0.0;
        est.alt_candidate = 0.0;
        return est;
    }

    est.peak_ratio = one.value / zero.value;
    const double root = std::sqrt(est.peak_ratio);
    est.candidate = root / (1.0 + root);
    if (root != 1.0) est.alt_candidate = -root / (1.0 - root);
    return est;
}

}  // namespace modval

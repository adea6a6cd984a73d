#pragma once

// Locale-independent number formatting and the CSV tables emitted by the CLI.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <system_error>
#include <vector>

#include "modval/faux_qubit.hpp"
#include "modval/modular_dynamics.hpp"
#include "modval/mzi.hpp"
#include "modval/pointer_grid.hpp"

namespace modval::csv {

inline constexpr int kSignificantDigits = 12;

/// 12 significant digits, '.' separator, always with a decimal point or
/// exponent ("1.0", "-0.5", "1.5e-08"). Negative zero prints as "0.0".
inline std::string format_number(double x) {
    if (x == 0.0) return "0.0";
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, kSignificantDigits);
    if (res.ec != std::errc{}) return "nan";
    std::string s(buf, res.ptr);
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
}

/// `re, im`. A component below 1e-12 of max(1, |z|) is rounding residue at the
/// printed precision and prints as 0.0.
inline std::string format_complex(std::complex<double> z) {
    const double scale = std::max(1.0, std::abs(z));
    auto chop = [&](double v) { return std::abs(v) < 1e-12 * scale ? 0.0 : v; };
    return format_number(chop(z.real())) + ", " + format_number(chop(z.imag()));
}

inline void write_row(std::ostream& os, std::initializer_list<double> values) {
    bool first = true;
    for (const double v : values) {
        if (!first) os << ',';
        os << format_number(v);
        first = false;
    }
    os << '\n';
}

/// Columns q,re_amp,im_amp (plus intensity when given).
inline void write_pointer(std::ostream& os, const PointerState& phi, std::span<const double> intensity = {}) {
    const bool with_intensity = !intensity.empty();
    if (with_intensity && intensity.size() != phi.size()) {
        throw DimensionMismatch("intensity column length does not match pointer");
    }
    os << (with_intensity ? "q,re_amp,im_amp,intensity\n" : "q,re_amp,im_amp\n");
    for (std::size_t k = 0; k < phi.size(); ++k) {
        os << format_number(phi.grid().q(k)) << ',' << format_number(phi[k].real()) << ','
           << format_number(phi[k].imag());
        if (with_intensity) os << ',' << format_number(intensity[k]);
        os << '\n';
    }
}

inline void write_persistence(std::ostream& os, std::span<const PersistenceRow> rows) {
    os << "gamma,centroid,M,interference_coefficient\n";
    for (const auto& r : rows) write_row(os, {r.gamma, r.centroid, r.M, r.interference_coefficient});
}

inline void write_orthogonality(std::ostream& os, std::span<const OrthogonalityRow> rows) {
    os << "gamma,abs_overlap\n";
    for (const auto& r : rows) write_row(os, {r.gamma, r.abs_overlap});
}

inline void write_response(std::ostream& os, std::span<const mzi::ResponseRow> rows) {
    os << "gamma,centroid\n";
    for (const auto& r : rows) write_row(os, {r.gamma, r.centroid});
}

inline void write_readout_header(std::ostream& os) {
    os << "gamma,peak_ratio,candidate,alt_candidate,interference_bound,degenerate\n";
}

inline void write_readout(std::ostream& os, double gamma, const ReadoutEstimate& est) {
    os << format_number(gamma) << ',' << format_number(est.peak_ratio) << ',' << format_number(est.candidate)
       << ',' << (est.alt_candidate ? format_number(*est.alt_candidate) : std::string("nan")) << ','
       << format_number(est.interference_bound) << ',' << (est.degenerate() ? 1 : 0) << '\n';
}

}  // namespace modval::csv

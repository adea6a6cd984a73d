#pragma once

// Twin Mach-Zehnder interferometer as a realization of V_m.
//
// The optical network is tracked in a two-dimensional path basis, index 0 for
// the "R" path and index 1 for the "L" path at every stage:
//
//   R1 --BS1--> (R2, L2)            pre-selection  psi_i = BS |R1>
//   mirror M1 on L2                 measured projector A = |L2><L2|
//   (R3, L3) --BS2--> (L4, R4)      index 0 = L4-R5 (dark at phi = 0), index 1 = R4-L5
//   shutter on L4-R5 (optional), phase window exp(i phi) on R4-L5
//   (R5, L5) --BS3--> (R6, L6)      post-selection  <psi_f| = <port| BS3 Phase Shutter BS2
//
// Beamsplitters use BS = [[1, i], [i, 1]] / sqrt(2). With this convention
// BS2 BS1 |R1> has no amplitude on index 0, which fixes the dark path.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "modval/errors.hpp"
#include "modval/modular_dynamics.hpp"
#include "modval/pointer_grid.hpp"
#include "modval/quantum_core.hpp"

namespace modval::mzi {

enum class OutputPort { R6, L6 };

struct Scenario {
    double phase = 0.0;  // phase window phi, radians
    OutputPort port = OutputPort::R6;
    bool dark_path_blocked = false;
    double sigma = 1.0;
    std::vector<double> gammas;
    std::size_t grid_points = Grid::kDefaultPoints;
};

struct Realization {
    PpsEnsemble ensemble;
    Projector projector;
    Complex weak_value;
    Complex dark_path_amplitude;  // amplitude on L4-R5 with no coupling
};

namespace detail {

using Row = std::array<Complex, 2>;

inline Complex apply_row(const Row& row, Complex a0, Complex a1) { return row[0] * a0 + row[1] * a1; }

inline std::array<Row, 2> beamsplitter() {
    const double h = std::numbers::sqrt2 / 2.0;
    const Complex i{0.0, 1.0};
    return {Row{h, i * h}, Row{i * h, h}};
}

}  // namespace detail

inline Realization realize(const Scenario& sc) {
    if (!(sc.sigma > 0.0)) throw InvalidArgument("beam width sigma must be positive");
    const auto bs = detail::beamsplitter();

    // after BS1
    const Complex in0 = bs[0][0];
    const Complex in1 = bs[1][0];
    SystemState psi_i({in0, in1});

    const Complex dark = detail::apply_row(bs[0], in0, in1);

    // <port| BS3
    const std::size_t out = sc.port == OutputPort::R6 ? 0 : 1;
    detail::Row bra = bs[out];
    // phase window on R4-L5, shutter on L4-R5
    bra[1] *= std::polar(1.0, sc.phase);
    if (sc.dark_path_blocked) bra[0] = 0.0;
    // <port| BS3 Phase Shutter BS2, as a bra on the (R2, L2) arms
    const detail::Row back{bra[0] * bs[0][0] + bra[1] * bs[1][0], bra[0] * bs[0][1] + bra[1] * bs[1][1]};

    const double bra_norm = std::sqrt(std::norm(back[0]) + std::norm(back[1]));
    if (!(bra_norm > kDefaultOverlapFloor)) {
        throw PostSelectionDark("no light can reach the selected output port");
    }
    // |psi_f> is the conjugate of the bra
    SystemState psi_f = SystemState::normalized({std::conj(back[0]), std::conj(back[1])});

    try {
        PpsEnsemble ens(std::move(psi_i), std::move(psi_f));
        Projector a = Projector::onto_basis(2, 1);
        const Complex aw = weak_value(ens, a).value;
        return Realization{std::move(ens), std::move(a), aw, dark};
    } catch (const OverlapTooSmall& e) {
        throw PostSelectionDark(std::string("selected port is dark: ") + e.what());
    }
}

inline Grid scenario_grid(const Scenario& sc, std::span<const double> extra_gammas = {}) {
    double lo = 0.0;
    double hi = 0.0;
    for (const double g : sc.gammas) lo = std::min(lo, g), hi = std::max(hi, g);
    for (const double g : extra_gammas) lo = std::min(lo, g), hi = std::max(hi, g);
    return Grid::for_shifts(sc.sigma, lo, hi, sc.grid_points);
}

struct CameraImage {
    ModularPointerResult result;
    std::vector<double> intensity;
};

/// Intensity at the camera for displacement gamma of M1.
inline CameraImage camera_profile(const Scenario& sc, double gamma) {
    const Realization real = realize(sc);
    const double extra[] = {gamma};
    const PointerState phi = gaussian_pointer(scenario_grid(sc, extra), sc.sigma);
    auto result = apply_modular_operator(real.ensemble, real.projector, phi, gamma);
    auto intensity = spatial_profile(result);
    return CameraImage{std::move(result), std::move(intensity)};
}

struct ResponseRow {
    double gamma;
    double centroid;
};

/// Camera-image centroid for every gamma of the scenario, on one shared grid.
inline std::vector<ResponseRow> pointer_response_curve(const Scenario& sc) {
    const Realization real = realize(sc);
    const PointerState phi = gaussian_pointer(scenario_grid(sc), sc.sigma);
    std::vector<ResponseRow> rows;
    rows.reserve(sc.gammas.size());
    for (const double g : sc.gammas) {
        const auto r = apply_modular_operator(real.ensemble, real.projector, phi, g);
        rows.push_back({g, centroid(spatial_profile(r), phi.grid())});
    }
    return rows;
}

}  // namespace modval::mzi

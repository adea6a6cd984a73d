#pragma once

// JSON scenario files for the command-line tool.
//
//   {
//     "system": {
//       "psi_i": [[0.7071067811865476, 0], [0.7071067811865476, 0]],
//       "psi_f": [[0.7071067811865476, 0], [0, 0.7071067811865476]],
//       "projector_onto": [[0, 0], [1, 0]]          // or "projector": full matrix
//     },
//     "pointer": {"sigma": 1.0, "grid": {"q_min": -16, "q_max": 24, "n": 1024}},
//     "coupling": {"gammas": [0, 2, 4, 8]},         // or {"gamma": 2}
//     "hbar": 1.0,
//     "mzi": {"phi": 0.0, "port": "R6", "dark_path_blocked": false}
//   }
//
// Complex numbers are [re, im] pairs (a bare number is read as real). State
// vectors are normalized on load. Every error names the offending field as a
// JSON pointer, or the line and column for syntax errors.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "modval/errors.hpp"
#include "modval/mzi.hpp"
#include "modval/pointer_grid.hpp"
#include "modval/quantum_core.hpp"

namespace modval::scenario {

class ScenarioError : public Error {
public:
    explicit ScenarioError(const std::string& what) : Error("ScenarioError", what) {}
};

struct SystemSpec {
    SystemState psi_i;
    SystemState psi_f;
    Projector projector;
};

struct PointerSpec {
    double sigma;
    std::optional<Grid> grid;
};

struct MziSpec {
    double phase = 0.0;
    mzi::OutputPort port = mzi::OutputPort::R6;
    bool dark_path_blocked = false;
};

struct Scenario {
    std::string source;
    std::optional<SystemSpec> system;
    std::optional<PointerSpec> pointer;
    std::vector<double> gammas;
    double hbar = 1.0;
    double overlap_floor = kDefaultOverlapFloor;
    double derivative_step = 1e-4;
    std::optional<MziSpec> mzi;

    const SystemSpec& require_system() const {
        if (!system) throw ScenarioError(source + ": missing required field /system");
        return *system;
    }
    const PointerSpec& require_pointer() const {
        if (!pointer) throw ScenarioError(source + ": missing required field /pointer");
        return *pointer;
    }
    const MziSpec& require_mzi() const {
        if (!mzi) throw ScenarioError(source + ": missing required field /mzi");
        return *mzi;
    }
    const std::vector<double>& require_gammas() const {
        if (gammas.empty()) throw ScenarioError(source + ": missing required field /coupling");
        return gammas;
    }
    double require_single_gamma() const {
        const auto& g = require_gammas();
        if (g.size() != 1) throw ScenarioError(source + ": /coupling must give a single \"gamma\" here");
        return g.front();
    }

    /// Throws OverlapTooSmall for an orthogonal post-selection.
    PpsEnsemble ensemble() const {
        const auto& s = require_system();
        return PpsEnsemble(s.psi_i, s.psi_f, overlap_floor);
    }

    /// The explicit grid, or the default grid covering every gamma.
    Grid grid() const {
        const auto& p = require_pointer();
        if (p.grid) return *p.grid;
        double lo = 0.0;
        double hi = 0.0;
        for (const double g : gammas) {
            lo = std::min(lo, g);
            hi = std::max(hi, g);
        }
        return Grid::for_shifts(p.sigma, lo, hi);
    }

    PointerState pointer_state() const { return gaussian_pointer(grid(), require_pointer().sigma); }

    mzi::Scenario mzi_scenario() const {
        const auto& m = require_mzi();
        mzi::Scenario sc;
        sc.phase = m.phase;
        sc.port = m.port;
        sc.dark_path_blocked = m.dark_path_blocked;
        sc.sigma = require_pointer().sigma;
        sc.gammas = gammas;
        if (pointer->grid) sc.grid_points = pointer->grid->size();
        return sc;
    }
};

namespace detail {

using nlohmann::json;

// A JSON node plus the pointer path that reached it, for error messages.
class Node {
public:
    Node(const json& j, std::string path, const std::string& source) : j_(j), path_(std::move(path)), src_(source) {}

    [[noreturn]] void fail(const std::string& msg) const {
        throw ScenarioError(src_ + ": " + (path_.empty() ? std::string("/") : path_) + ": " + msg);
    }

    const std::string& path() const { return path_; }
    bool has(const char* key) const { return j_.is_object() && j_.contains(key); }

    Node operator[](const char* key) const {
        if (!j_.is_object()) fail("expected an object");
        if (!j_.contains(key)) {
            Node(j_, path_ + "/" + key, src_).fail("missing required field");
        }
        return Node(j_.at(key), path_ + "/" + key, src_);
    }

    Node at(std::size_t i) const { return Node(j_.at(i), path_ + "/" + std::to_string(i), src_); }

    void only_keys(std::initializer_list<std::string_view> allowed) const {
        if (!j_.is_object()) fail("expected an object");
        for (const auto& item : j_.items()) {
            if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
                Node(j_, path_ + "/" + item.key(), src_).fail("unknown field");
            }
        }
    }

    std::size_t array_size() const {
        if (!j_.is_array()) fail("expected an array");
        return j_.size();
    }

    double number() const {
        if (!j_.is_number()) fail("expected a number");
        const double v = j_.get<double>();
        if (!std::isfinite(v)) fail("expected a finite number");
        return v;
    }

    std::size_t count() const {
        if (!j_.is_number_integer() && !j_.is_number_unsigned()) fail("expected a non-negative integer");
        const auto v = j_.get<long long>();
        if (v < 0) fail("expected a non-negative integer");
        return static_cast<std::size_t>(v);
    }

    bool boolean() const {
        if (!j_.is_boolean()) fail("expected true or false");
        return j_.get<bool>();
    }

    std::string string() const {
        if (!j_.is_string()) fail("expected a string");
        return j_.get<std::string>();
    }

    Complex complex() const {
        if (j_.is_number()) return {number(), 0.0};
        if (!j_.is_array() || j_.size() != 2) fail("expected a complex number [re, im]");
        return {at(0).number(), at(1).number()};
    }

    std::vector<Complex> complex_vector() const {
        std::vector<Complex> v(array_size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = at(i).complex();
        return v;
    }

private:
    const json& j_;
    std::string path_;
    const std::string& src_;
};

inline SystemState read_state(const Node& n) {
    try {
        return SystemState::normalized(n.complex_vector());
    } catch (const InvalidArgument& e) {
        n.fail(e.what());
    }
}

inline SystemSpec read_system(const Node& n) {
    n.only_keys({"dim", "psi_i", "psi_f", "projector", "projector_onto"});
    SystemState psi_i = read_state(n["psi_i"]);
    SystemState psi_f = read_state(n["psi_f"]);
    if (psi_f.dim() != psi_i.dim()) n["psi_f"].fail("dimension differs from /system/psi_i");
    if (n.has("dim") && n["dim"].count() != psi_i.dim()) n["dim"].fail("does not match the length of psi_i");
    const std::size_t d = psi_i.dim();

    if (n.has("projector") == n.has("projector_onto")) {
        n.fail("give exactly one of \"projector\" (matrix) or \"projector_onto\" (vector)");
    }
    if (n.has("projector_onto")) {
        const Node v = n["projector_onto"];
        SystemState u = read_state(v);
        if (u.dim() != d) v.fail("dimension differs from /system/psi_i");
        return SystemSpec{std::move(psi_i), std::move(psi_f), Projector::rank_one(u)};
    }
    const Node m = n["projector"];
    if (m.array_size() != d) m.fail("expected " + std::to_string(d) + " rows");
    std::vector<Complex> entries;
    entries.reserve(d * d);
    for (std::size_t r = 0; r < d; ++r) {
        const auto row = m.at(r).complex_vector();
        if (row.size() != d) m.at(r).fail("expected " + std::to_string(d) + " entries");
        entries.insert(entries.end(), row.begin(), row.end());
    }
    try {
        return SystemSpec{std::move(psi_i), std::move(psi_f), Projector(d, std::move(entries))};
    } catch (const Error& e) {
        m.fail(e.what());
    }
}

inline PointerSpec read_pointer(const Node& n) {
    n.only_keys({"sigma", "grid"});
    PointerSpec p{n["sigma"].number(), std::nullopt};
    if (!(p.sigma > 0.0)) n["sigma"].fail("must be positive");
    if (n.has("grid")) {
        const Node g = n["grid"];
        g.only_keys({"q_min", "q_max", "n"});
        try {
            p.grid = Grid(g["q_min"].number(), g["q_max"].number(), g["n"].count());
        } catch (const InvalidArgument& e) {
            g.fail(e.what());
        }
    }
    return p;
}

inline std::vector<double> read_coupling(const Node& n) {
    n.only_keys({"gamma", "gammas"});
    if (n.has("gamma") == n.has("gammas")) n.fail("give exactly one of \"gamma\" or \"gammas\"");
    if (n.has("gamma")) return {n["gamma"].number()};
    const Node list = n["gammas"];
    std::vector<double> g(list.array_size());
    if (g.empty()) list.fail("must not be empty");
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = list.at(i).number();
    return g;
}

inline MziSpec read_mzi(const Node& n) {
    n.only_keys({"phi", "port", "dark_path_blocked"});
    MziSpec m;
    if (n.has("phi")) m.phase = n["phi"].number();
    if (n.has("port")) {
        const std::string port = n["port"].string();
        if (port == "R6") {
            m.port = mzi::OutputPort::R6;
        } else if (port == "L6") {
            m.port = mzi::OutputPort::L6;
        } else {
            n["port"].fail("expected \"R6\" or \"L6\"");
        }
    }
    if (n.has("dark_path_blocked")) m.dark_path_blocked = n["dark_path_blocked"].boolean();
    return m;
}

}  // namespace detail

inline Scenario parse(std::string_view text, const std::string& source = "<scenario>") {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text.begin(), text.end(), nullptr, true, /*ignore_comments=*/true);
    } catch (const nlohmann::json::parse_error& e) {
        throw ScenarioError(source + ": " + e.what());
    }
    const detail::Node root(j, "", source);
    root.only_keys({"system", "pointer", "coupling", "hbar", "overlap_floor", "derivative_step", "mzi"});

    Scenario sc;
    sc.source = source;
    if (root.has("system")) sc.system = detail::read_system(root["system"]);
    if (root.has("pointer")) sc.pointer = detail::read_pointer(root["pointer"]);
    if (root.has("coupling")) sc.gammas = detail::read_coupling(root["coupling"]);
    if (root.has("hbar")) {
        sc.hbar = root["hbar"].number();
        if (!(sc.hbar > 0.0)) root["hbar"].fail("must be positive");
    }
    if (root.has("overlap_floor")) {
        sc.overlap_floor = root["overlap_floor"].number();
        if (!(sc.overlap_floor > 0.0)) root["overlap_floor"].fail("must be positive");
    }
    if (root.has("derivative_step")) {
        sc.derivative_step = root["derivative_step"].number();
        if (!(sc.derivative_step > 0.0)) root["derivative_step"].fail("must be positive");
    }
    if (root.has("mzi")) sc.mzi = detail::read_mzi(root["mzi"]);
    return sc;
}

inline Scenario load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError(path.string() + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path.string());
}

}  // namespace modval::scenario

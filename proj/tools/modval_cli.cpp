// modval: command-line front end for the modular-value simulator.
//
// Exit codes: 0 success, 2 input error, 3 domain error.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "modval/modval.hpp"
#include "modval/scenario.hpp"

namespace {

using namespace modval;

constexpr int kExitInput = 2;
constexpr int kExitDomain = 3;

struct CommonOptions {
    std::string scenario_path;
    std::string out_path;
    bool oracle = false;
    std::string oracle_mode = "spectral";
    int oracle_steps = 2048;
    std::optional<double> hbar;
};

struct ExtraOptions {
    bool derivative = false;
    std::string profile_path;
    std::optional<double> camera_gamma;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--scenario", opts.scenario_path, "Scenario file (JSON)")->required();
    cmd->add_option("--out", opts.out_path, "Write output here instead of stdout");
    cmd->add_flag("--oracle", opts.oracle, "Cross-check against the joint-space oracle; report max deviation on stderr");
    cmd->add_option("--oracle-mode", opts.oracle_mode, "Oracle mode: spectral or strict")
        ->check(CLI::IsMember({"spectral", "strict"}));
    cmd->add_option("--oracle-steps", opts.oracle_steps, "Trotter steps for --oracle-mode strict")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--hbar", opts.hbar, "Override the scenario's hbar")->check(CLI::PositiveNumber);
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw InvalidArgument("cannot open output file " + path);
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

scenario::Scenario load_scenario(const CommonOptions& opts) {
    auto sc = scenario::load(opts.scenario_path);
    if (opts.hbar) sc.hbar = *opts.hbar;
    return sc;
}

OracleOptions oracle_options(const CommonOptions& opts) {
    OracleOptions o;
    o.mode = opts.oracle_mode == "strict" ? OracleMode::StrictTrotter : OracleMode::Spectral;
    o.steps = opts.oracle_steps;
    return o;
}

double max_deviation(const PointerState& a, const PointerState& b) {
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
    return worst;
}

void report_oracle(double deviation, double infidelity) {
    std::cerr << "oracle max deviation: " << csv::format_number(deviation)
              << " (1 - fidelity: " << csv::format_number(infidelity) << ")\n";
}

int cmd_weak_value(const CommonOptions& opts) {
    const auto sc = load_scenario(opts);
    const auto ens = sc.ensemble();
    const auto aw = weak_value(ens, sc.require_system().projector);
    Output out(opts.out_path);
    out.stream() << csv::format_complex(aw.value) << '\n';
    return 0;
}

int cmd_modular_value(const CommonOptions& opts, const ExtraOptions& extra) {
    const auto sc = load_scenario(opts);
    const auto ens = sc.ensemble();
    const auto& A = sc.require_system().projector;
    const auto mv = modular_value(ens, A, sc.require_single_gamma(), sc.hbar);
    Output out(opts.out_path);
    out.stream() << csv::format_complex(mv.value) << '\n';
    if (extra.derivative) {
        const Complex aw = weak_value(ens, A).value;
        const Complex d = weak_from_modular_derivative(ens, A, sc.hbar, sc.derivative_step);
        out.stream() << "weak_value: " << csv::format_complex(aw) << '\n'
                     << "derivative: " << csv::format_complex(d) << '\n'
                     << "abs_error: " << csv::format_number(std::abs(d - aw)) << '\n';
    }
    return 0;
}

int cmd_profile(const CommonOptions& opts) {
    const auto sc = load_scenario(opts);
    const auto ens = sc.ensemble();
    const auto& A = sc.require_system().projector;
    const auto phi = sc.pointer_state();
    const double gamma = sc.require_single_gamma();
    const auto result = apply_modular_operator(ens, A, phi, gamma);
    const auto profile = spatial_profile(result);
    Output out(opts.out_path);
    csv::write_pointer(out.stream(), result.state, profile);
    if (opts.oracle) {
        const auto ref = joint_space_oracle(ens, A, phi, gamma, oracle_options(opts));
        report_oracle(max_deviation(ref, result.state), 1.0 - fidelity(ref, result.state));
    }
    return 0;
}

int cmd_persistence(const CommonOptions& opts) {
    const auto sc = load_scenario(opts);
    const auto ens = sc.ensemble();
    const auto& A = sc.require_system().projector;
    const auto phi = sc.pointer_state();
    const auto rows = persistence_scan(ens, A, phi, sc.require_gammas());
    Output out(opts.out_path);
    csv::write_persistence(out.stream(), rows);
    if (opts.oracle) {
        double dev = 0.0;
        double infid = 0.0;
        for (const double g : sc.gammas) {
            const auto exact = apply_modular_operator(ens, A, phi, g).state;
            const auto ref = joint_space_oracle(ens, A, phi, g, oracle_options(opts));
            dev = std::max(dev, max_deviation(ref, exact));
            infid = std::max(infid, 1.0 - fidelity(ref, exact));
        }
        report_oracle(dev, infid);
    }
    return 0;
}

int cmd_orthogonality(const CommonOptions& opts) {
    const auto sc = load_scenario(opts);
    const auto rows = orthogonality_scan(sc.pointer_state(), sc.require_gammas());
    Output out(opts.out_path);
    csv::write_orthogonality(out.stream(), rows);
    return 0;
}

// Reads the q and intensity columns of a profile CSV and rebuilds its grid.
std::pair<Grid, std::vector<double>> read_profile_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open profile file " + path);
    auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cell.erase(0, cell.find_first_not_of(" \t\r"));
            cell.erase(cell.find_last_not_of(" \t\r") + 1);
            cells.push_back(cell);
        }
        return cells;
    };
    std::string line;
    if (!std::getline(in, line)) throw InvalidArgument(path + ": empty profile file");
    const auto header = split(line);
    const auto q_col = std::find(header.begin(), header.end(), "q") - header.begin();
    const auto i_col = std::find(header.begin(), header.end(), "intensity") - header.begin();
    if (q_col == static_cast<long>(header.size()) || i_col == static_cast<long>(header.size())) {
        throw InvalidArgument(path + ": header must contain \"q\" and \"intensity\" columns");
    }
    std::vector<double> qs;
    std::vector<double> intensity;
    for (std::size_t line_no = 2; std::getline(in, line); ++line_no) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = split(line);
        auto parse = [&](long col) {
            if (col >= static_cast<long>(cells.size())) {
                throw InvalidArgument(path + ":" + std::to_string(line_no) + ": missing column");
            }
            const std::string& c = cells[static_cast<std::size_t>(col)];
            double v = 0.0;
            const auto res = std::from_chars(c.data(), c.data() + c.size(), v);
            if (res.ec != std::errc{} || res.ptr != c.data() + c.size()) {
                throw InvalidArgument(path + ":" + std::to_string(line_no) + ": not a number: " + c);
            }
            return v;
        };
        qs.push_back(parse(q_col));
        intensity.push_back(parse(i_col));
    }
    if (qs.size() < Grid::kMinPoints) throw InvalidArgument(path + ": too few profile rows");
    const double dq = (qs.back() - qs.front()) / static_cast<double>(qs.size() - 1);
    for (std::size_t k = 0; k < qs.size(); ++k) {
        if (std::abs(qs[k] - (qs.front() + static_cast<double>(k) * dq)) > 1e-8 * std::abs(dq)) {
            throw InvalidArgument(path + ":" + std::to_string(k + 2) + ": q column is not a uniform grid");
        }
    }
    return {Grid(qs.front(), qs.front() + static_cast<double>(qs.size()) * dq, qs.size()), std::move(intensity)};
}

int cmd_faux_read(const CommonOptions& opts, const ExtraOptions& extra) {
    const auto sc = load_scenario(opts);
    const double sigma = sc.require_pointer().sigma;
    Output out(opts.out_path);
    csv::write_readout_header(out.stream());
    if (!extra.profile_path.empty()) {
        const auto [grid, profile] = read_profile_csv(extra.profile_path);
        const double gamma = sc.require_single_gamma();
        csv::write_readout(out.stream(), gamma, read_faux_qubit(profile, grid, gamma, sigma));
        return 0;
    }
    const auto ens = sc.ensemble();
    const auto& A = sc.require_system().projector;
    const auto phi = sc.pointer_state();
    for (const double g : sc.require_gammas()) {
        const auto profile = spatial_profile(apply_modular_operator(ens, A, phi, g));
        csv::write_readout(out.stream(), g, read_faux_qubit(profile, phi.grid(), g, sigma));
    }
    return 0;
}

int cmd_mzi(const CommonOptions& opts, const ExtraOptions& extra) {
    const auto sc = load_scenario(opts);
    auto msc = sc.mzi_scenario();
    const auto real = mzi::realize(msc);
    std::cerr << "A_w = " << csv::format_complex(real.weak_value) << '\n';
    Output out(opts.out_path);
    if (extra.camera_gamma) {
        const auto image = mzi::camera_profile(msc, *extra.camera_gamma);
        csv::write_pointer(out.stream(), image.result.state, image.intensity);
        return 0;
    }
    const auto rows = mzi::pointer_response_curve(msc);
    csv::write_response(out.stream(), rows);
    if (opts.oracle) {
        const auto phi = gaussian_pointer(mzi::scenario_grid(msc), msc.sigma);
        double dev = 0.0;
        double infid = 0.0;
        for (const double g : msc.gammas) {
            const auto exact = apply_modular_operator(real.ensemble, real.projector, phi, g).state;
            const auto ref = joint_space_oracle(real.ensemble, real.projector, phi, g, oracle_options(opts));
            dev = std::max(dev, max_deviation(ref, exact));
            infid = std::max(infid, 1.0 - fidelity(ref, exact));
        }
        report_oracle(dev, infid);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weak values, modular values and the modular valued pointer operator"};
    app.require_subcommand(1);

    CommonOptions opts;
    ExtraOptions extra;

    auto* weak = app.add_subcommand("weak-value", "Print the weak value A_w as `re, im`");
    auto* modular = app.add_subcommand("modular-value", "Print the modular value (A)_m as `re, im`");
    auto* profile = app.add_subcommand("profile", "Pointer state and spatial profile CSV for a single gamma");
    auto* persistence = app.add_subcommand("persistence", "Centroid, M and interference coefficient per gamma");
    auto* orthogonality = app.add_subcommand("orthogonality", "|<0~|1~>| per gamma");
    auto* faux = app.add_subcommand("faux-read", "Read a real weak value from the faux-qubit profile");
    auto* mzi_cmd = app.add_subcommand("mzi", "Twin Mach-Zehnder pointer response or camera profile");

    for (auto* cmd : {weak, modular, profile, persistence, orthogonality, faux, mzi_cmd}) add_common(cmd, opts);
    modular->add_flag("--derivative", extra.derivative, "Also print the finite-difference derivative check");
    faux->add_option("--profile", extra.profile_path, "Read a measured profile CSV (q, intensity) instead");
    mzi_cmd->add_option("--camera-gamma", extra.camera_gamma, "Emit the camera profile at this gamma");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try {
        if (*weak) return cmd_weak_value(opts);
        if (*modular) return cmd_modular_value(opts, extra);
        if (*profile) return cmd_profile(opts);
        if (*persistence) return cmd_persistence(opts);
        if (*orthogonality) return cmd_orthogonality(opts);
        if (*faux) return cmd_faux_read(opts, extra);
        if (*mzi_cmd) return cmd_mzi(opts, extra);
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitInput;
}

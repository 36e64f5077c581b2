#pragma once

// Command-line front end: wigner, sparsity, qkt, portrait.
//
// Exit codes: 0 success, 2 usage or parse error, 3 domain error.
// Every output starts with a header carrying the version and the fully
// resolved configuration. Header lines start with "# "; stripping that prefix
// yields an INI file accepted by --config (the version and column lines become
// ';' comments).

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "swpst/errors.hpp"
#include "swpst/io.hpp"
#include "swpst/kicked_top.hpp"
#include "swpst/phase_space.hpp"
#include "swpst/states.hpp"
#include "swpst/study.hpp"
#include "swpst/tomography.hpp"

namespace swpst::cli {

inline constexpr std::string_view version = "1.0.0";
inline constexpr const char* output_dir_env = "SWPST_OUTPUT_DIR";

/// Malformed user input; maps to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

inline double parse_double(const std::string& s, std::string_view what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw UsageError("bad " + std::string(what) + ": '" + s + "'");
    }
}

inline int parse_int(const std::string& s, std::string_view what) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw UsageError("bad " + std::string(what) + ": '" + s + "'");
    }
}

}  // namespace detail

inline std::vector<double> parse_double_list(std::string_view text, std::string_view what) {
    if (text.empty()) throw UsageError("empty " + std::string(what) + " list");
    std::vector<double> out;
    for (const auto& part : detail::split(text, ',')) out.push_back(detail::parse_double(part, what));
    return out;
}

/// basis:<n> | plusplus | bell | scs:<theta>,<phi> | harmonic:<j> | randharm:<j>,<eta>
inline DensityMatrix parse_state_spec(std::string_view spec, int dim, std::uint64_t seed) {
    const auto colon = spec.find(':');
    const std::string kind(spec.substr(0, colon));
    const std::string args = colon == std::string_view::npos ? "" : std::string(spec.substr(colon + 1));
    const auto arg_list = [&](std::size_t expected) {
        auto parts = detail::split(args, ',');
        if (colon == std::string_view::npos || parts.size() != expected) {
            throw UsageError("state '" + std::string(spec) + "' expects " + std::to_string(expected) + " argument(s)");
        }
        return parts;
    };
    const auto require_two_qubits = [&] {
        if (dim != 4) throw DimensionMismatch("state '" + kind + "' is a two-qubit state; needs --n 4");
    };

    if (kind == "basis") {
        return basis_state(detail::parse_int(arg_list(1)[0], "basis index"), dim).density();
    }
    if (kind == "plusplus" || kind == "bell") {
        if (colon != std::string_view::npos) throw UsageError("state '" + kind + "' takes no arguments");
        require_two_qubits();
        return kind == "bell" ? bell_state().density() : plus_plus().density();
    }
    if (kind == "scs") {
        const auto a = arg_list(2);
        const double theta = detail::parse_double(a[0], "theta");
        const double phi = detail::parse_double(a[1], "phi");
        require_two_qubits();
        return two_qubit_scs(theta, phi);
    }
    if (kind == "harmonic") {
        return harmonic_state(detail::parse_int(arg_list(1)[0], "harmonic index"), dim).density();
    }
    if (kind == "randharm") {
        const auto a = arg_list(2);
        RandomizedHarmonicSpec rs{detail::parse_int(a[0], "harmonic index"), detail::parse_double(a[1], "eta"), seed};
        return randomized_harmonic(rs, dim).density();
    }
    throw UsageError("unknown state spec '" + std::string(spec) + "'");
}

/// "" (all of G_N) | row:<q> | col:<p> | q:p,q:p,...
inline CellSelection parse_cells(std::string_view spec, int dim) {
    if (spec.empty() || spec == "all") return CellSelection::all(dim);
    if (spec.starts_with("row:")) return CellSelection::row(detail::parse_int(std::string(spec.substr(4)), "row"), dim);
    if (spec.starts_with("col:")) {
        const int p = detail::parse_int(std::string(spec.substr(4)), "column");
        CellSelection sel(dim);
        for (int q = 0; q < dim; ++q) sel.add(q, p);
        return sel;
    }
    CellSelection sel(dim);
    for (const auto& item : detail::split(spec, ',')) {
        const auto qp = detail::split(item, ':');
        if (qp.size() != 2) throw UsageError("cell '" + item + "' is not of the form q:p");
        sel.add(detail::parse_int(qp[0], "cell q"), detail::parse_int(qp[1], "cell p"));
    }
    return sel;
}

struct Header {
    std::string command;
    std::vector<std::string> config;  // key=value lines

    [[nodiscard]] std::string csv() const {
        std::string out = "# ; swpst " + std::string(version) + "\n# [" + command + "]\n";
        for (const auto& line : config) out += "# " + line + "\n";
        return out;
    }

    [[nodiscard]] io::json json() const {
        return {{"version", std::string(version)}, {"command", command}, {"config", config}};
    }
};

namespace detail {

/// Shortest-safe text for a double: 17 significant digits round-trip exactly.
inline std::string exact_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string quoted(std::string_view v) { return "\"" + std::string(v) + "\""; }

}  // namespace detail

struct WignerOptions {
    std::string state = "basis:0";
    int n = 4;
    std::string method = "direct";
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    std::string cells;
    bool full = false;
    std::string format = "csv";
};

/// Resolved configuration of each command, in --config syntax. The output path
/// is not part of it, so the same run written to two places is byte-identical.
inline Header header_for(const WignerOptions& o) {
    return {"wigner",
            {"state=" + detail::quoted(o.state), "n=" + std::to_string(o.n), "method=" + detail::quoted(o.method),
             "shots=" + std::to_string(o.shots), "seed=" + std::to_string(o.seed), "cells=" + detail::quoted(o.cells),
             std::string("full=") + (o.full ? "true" : "false"), "format=" + detail::quoted(o.format)}};
}

inline std::string render_wigner(const WignerOptions& o) {
    const Header header = header_for(o);
    if (o.n < 2) throw InvalidDimension("--n must be at least 2");
    const PhaseSpaceFrame frame(o.n);
    const DensityMatrix rho = parse_state_spec(o.state, o.n, o.seed);
    const CellSelection sel = parse_cells(o.cells, o.n);
    TomographyResult result;
    if (o.method == "direct") {
        result = direct_read(frame, rho, sel);
    } else if (o.method == "circuit") {
        result = circuit_read(frame, rho, sel, o.shots, o.seed);
    } else {
        throw UsageError("unknown method '" + o.method + "'");
    }
    if (o.full && !sel.covers_quadrant()) throw UsageError("--full needs the whole quadrant selected");

    std::optional<WignerMatrix> quadrant;
    if (sel.covers_quadrant()) {
        RealMatrix m(o.n, o.n);
        for (const auto& e : result.estimates) m(e.cell.q, e.cell.p) = e.w;
        quadrant.emplace(std::move(m));
    }

    if (o.format == "json") {
        io::json j{{"header", header.json()}, {"dim", o.n}};
        const io::json body = io::to_json(result);
        for (const auto& [key, value] : body.items()) j[key] = value;
        if (quadrant) j["quadrant"] = io::to_json(quadrant->quadrant());
        if (o.full) j["full"] = io::to_json(expand_full(*quadrant));
        return j.dump() + "\n";
    }
    if (o.format != "csv") throw UsageError("unknown format '" + o.format + "'");
    std::string out = header.csv() + io::tomography_csv(result);
    if (o.full) out += "# ; full grid\n" + io::full_grid_csv(*quadrant);
    return out;
}

struct SparsityOptions {
    int j = 0;
    int n = 8;
    std::string etas = "0,0.2,0.4,0.6,0.8,1";
    std::string thresholds = "0.1,0.01";
    int seeds = 200;
    std::uint64_t seed = 0;
    std::string format = "csv";
};

inline Header header_for(const SparsityOptions& o) {
    return {"sparsity",
            {"j=" + std::to_string(o.j), "n=" + std::to_string(o.n), "eta=" + detail::quoted(o.etas),
             "thresholds=" + detail::quoted(o.thresholds), "seeds=" + std::to_string(o.seeds),
             "seed=" + std::to_string(o.seed), "format=" + detail::quoted(o.format)}};
}

inline std::string render_sparsity(const SparsityOptions& o) {
    const Header header = header_for(o);
    SparsityStudy study;
    study.j = o.j;
    study.dim = o.n;
    study.etas = parse_double_list(o.etas, "eta");
    study.thresholds = parse_double_list(o.thresholds, "threshold");
    study.seeds = o.seeds;
    study.base_seed = o.seed;
    for (double e : study.etas)
        if (e < 0.0 || e > 1.0) throw UsageError("eta values must lie in [0, 1]");
    for (double t : study.thresholds)
        if (t < 0.0 || t > 1.0) throw UsageError("thresholds must lie in [0, 1]");
    if (o.seeds < 1) throw UsageError("--seeds must be positive");
    if (o.format != "csv" && o.format != "json") throw UsageError("unknown format '" + o.format + "'");
    if (o.n < 2) throw InvalidDimension("--n must be at least 2");

    const auto rows = run_sparsity_study(study);
    if (o.format == "json") {
        io::json arr = io::json::array();
        for (const auto& r : rows) {
            arr.push_back({{"eta", r.eta},
                           {"threshold", r.threshold},
                           {"rho_sparsity", {{"mean", r.rho_sparsity.mean}, {"std", r.rho_sparsity.std}}},
                           {"w_sparsity", {{"mean", r.w_sparsity.mean}, {"std", r.w_sparsity.std}}},
                           {"infidelity", {{"mean", r.pruning_infidelity.mean}, {"std", r.pruning_infidelity.std}}}});
        }
        return io::json{{"header", header.json()}, {"rows", arr}}.dump() + "\n";
    }
    std::string out = header.csv();
    out += "# ; columns: eta,threshold,rho_sparsity_mean,rho_sparsity_std,w_sparsity_mean,w_sparsity_std,"
           "infidelity_mean,infidelity_std\n";
    for (const auto& r : rows) {
        out += io::format_real(r.eta) + "," + io::format_real(r.threshold) + "," + io::format_real(r.rho_sparsity.mean) +
               "," + io::format_real(r.rho_sparsity.std) + "," + io::format_real(r.w_sparsity.mean) + "," +
               io::format_real(r.w_sparsity.std) + "," + io::format_real(r.pruning_infidelity.mean) + "," +
               io::format_real(r.pruning_infidelity.std) + "\n";
    }
    return out;
}

inline double resolve_k_preset(const std::string& preset) {
    if (preset == "regular") return chaoticity::regular;
    if (preset == "mixed") return chaoticity::mixed;
    if (preset == "chaotic") return chaoticity::chaotic;
    throw UsageError("unknown k preset '" + preset + "' (regular|mixed|chaotic)");
}

struct QktOptions {
    std::string point = "R";
    std::optional<double> theta;
    std::optional<double> phi;
    double k = chaoticity::regular;
    std::string k_preset;
    int kicks = 10;
    std::string cells = "row:0";
    std::string method = "direct";
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    std::string format = "csv";
};

/// Replaces --point and --k-preset by the numbers they stand for.
inline QktOptions resolved(QktOptions o) {
    SphericalPoint start;
    if (o.point == "R") {
        start = initial_point::regular;
    } else if (o.point == "C") {
        start = initial_point::chaotic;
    } else {
        throw UsageError("unknown point '" + o.point + "' (R|C)");
    }
    if (!o.theta) o.theta = start.theta;
    if (!o.phi) o.phi = start.phi;
    if (!o.k_preset.empty()) {
        o.k = resolve_k_preset(o.k_preset);
        o.k_preset.clear();
    }
    return o;
}

inline Header header_for(const QktOptions& o) {
    return {"qkt",
            {"point=" + detail::quoted(o.point), "theta=" + detail::exact_real(*o.theta),
             "phi=" + detail::exact_real(*o.phi), "k=" + detail::exact_real(o.k), "kicks=" + std::to_string(o.kicks),
             "cells=" + detail::quoted(o.cells), "method=" + detail::quoted(o.method),
             "shots=" + std::to_string(o.shots), "seed=" + std::to_string(o.seed), "format=" + detail::quoted(o.format)}};
}

inline std::string render_qkt(const QktOptions& options) {
    const QktOptions o = resolved(options);
    const Header header = header_for(o);
    QKTParams params;
    params.theta0 = *o.theta;
    params.phi0 = *o.phi;
    params.k = o.k;
    if (o.kicks < 0) throw UsageError("--kicks must be non-negative");
    params.kicks = o.kicks;
    params.selection = parse_cells(o.cells, 4);
    if (o.method == "direct") {
        params.method = ReadoutMethod::direct;
    } else if (o.method == "circuit") {
        params.method = o.shots == 0 ? ReadoutMethod::circuit_exact : ReadoutMethod::circuit_sampled;
        params.shots = o.shots;
        params.seed = o.seed;
    } else {
        throw UsageError("unknown method '" + o.method + "'");
    }
    if (o.format != "csv" && o.format != "json") throw UsageError("unknown format '" + o.format + "'");

    const auto run = run_qkt(params);
    if (o.format == "json") {
        std::string out = io::json{{"header", header.json()}}.dump() + "\n";
        for (const auto& rec : run.records) out += io::to_json(rec).dump() + "\n";
        return out;
    }
    std::string out = header.csv() + "# ; columns: " + io::qkt_csv_columns(params.selection) + "\n";
    for (const auto& rec : run.records) out += io::qkt_csv_row(rec);
    return out;
}

struct PortraitOptions {
    double k = chaoticity::regular;
    std::string k_preset;
    std::string grid = "20x20";
    std::string seeds;  // "theta,phi;theta,phi" overrides --grid
    int steps = 200;
};

inline std::vector<SphericalPoint> parse_seed_points(std::string_view text) {
    std::vector<SphericalPoint> out;
    for (const auto& item : detail::split(text, ';')) {
        const auto tp = detail::split(item, ',');
        if (tp.size() != 2) throw UsageError("seed '" + item + "' is not of the form theta,phi");
        out.push_back({detail::parse_double(tp[0], "seed theta"), detail::parse_double(tp[1], "seed phi")});
    }
    return out;
}

inline Header header_for(const PortraitOptions& o, double k) {
    Header h{"portrait", {"k=" + detail::exact_real(k)}};
    if (o.seeds.empty()) {
        h.config.push_back("grid=" + detail::quoted(o.grid));
    } else {
        h.config.push_back("seeds=" + detail::quoted(o.seeds));
    }
    h.config.push_back("steps=" + std::to_string(o.steps));
    return h;
}

inline std::string render_portrait(const PortraitOptions& o) {
    const double k = o.k_preset.empty() ? o.k : resolve_k_preset(o.k_preset);
    const Header header = header_for(o, k);
    if (o.steps < 1) throw UsageError("--steps must be at least 1");
    std::vector<SphericalPoint> seeds;
    if (!o.seeds.empty()) {
        seeds = parse_seed_points(o.seeds);
    } else {
        const auto dims = detail::split(o.grid, 'x');
        if (dims.size() != 2) throw UsageError("grid '" + o.grid + "' is not of the form <n_theta>x<n_phi>");
        const int nt = detail::parse_int(dims[0], "grid");
        const int np = detail::parse_int(dims[1], "grid");
        if (nt < 1 || np < 1) throw UsageError("grid extents must be positive");
        seeds = seed_grid(nt, np);
    }
    return header.csv() + "# ; columns: seed_id,step,theta,phi\n" + io::portrait_csv(phase_portrait(k, seeds, o.steps));
}

/// Writes via a temporary sibling file and rename.
inline void write_atomically(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        f << content;
        if (!f.flush()) throw std::runtime_error("failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::filesystem::path resolve_output(const std::string& out) {
    std::filesystem::path p(out);
    if (p.is_relative()) {
        if (const char* dir = std::getenv(output_dir_env); dir != nullptr && *dir != '\0') return std::filesystem::path(dir) / p;
    }
    return p;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Selective Wigner phase-space tomography toolkit", "swpst"};
    app.set_version_flag("--version", std::string(version));
    app.set_config("--config", "", "Read options from an INI/TOML file ([command] sections)");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1);

    std::string out_path;
    const auto add_out = [&](CLI::App* sub) {
        sub->add_option("--out", out_path, "Output file (stdout when omitted; relative paths resolve against $" +
                                               std::string(output_dir_env) + ")")
            ->configurable(false);
    };

    WignerOptions wo;
    auto* wigner = app.add_subcommand("wigner", "Wigner matrix of a state, full or selective");
    wigner->add_option("--state", wo.state, "basis:<n>|plusplus|bell|scs:<t>,<p>|harmonic:<j>|randharm:<j>,<eta>")
        ->capture_default_str();
    wigner->add_option("--n", wo.n, "Hilbert dimension")->capture_default_str();
    wigner->add_option("--method", wo.method, "direct|circuit")->capture_default_str();
    wigner->add_option("--shots", wo.shots, "Shots per cell for circuit readout (0 = exact)")->capture_default_str();
    wigner->add_option("--seed", wo.seed, "RNG seed")->capture_default_str();
    wigner->add_option("--cells", wo.cells, "all|row:<q>|col:<p>|q:p,q:p,...")->capture_default_str();
    wigner->add_flag("--full", wo.full, "Also emit the full 2N x 2N grid");
    wigner->add_option("--format", wo.format, "csv|json")->capture_default_str();
    add_out(wigner);

    SparsityOptions so;
    auto* sparsity_cmd = app.add_subcommand("sparsity", "Sparsity and pruning statistics of randomized harmonic states");
    sparsity_cmd->add_option("--j", so.j, "Harmonic index")->capture_default_str();
    sparsity_cmd->add_option("--n", so.n, "Hilbert dimension")->capture_default_str();
    sparsity_cmd->add_option("--eta", so.etas, "Comma-separated eta grid")->capture_default_str();
    sparsity_cmd->add_option("--thresholds", so.thresholds, "Comma-separated thresholds")->capture_default_str();
    sparsity_cmd->add_option("--seeds", so.seeds, "Seeds per eta")->capture_default_str();
    sparsity_cmd->add_option("--seed", so.seed, "Base seed")->capture_default_str();
    sparsity_cmd->add_option("--format", so.format, "csv|json")->capture_default_str();
    add_out(sparsity_cmd);

    QktOptions qo;
    auto* qkt = app.add_subcommand("qkt", "Kicked top with selective readout after every kick");
    qkt->add_option("--point", qo.point, "R|C initial spin coherent state")->capture_default_str();
    qkt->add_option("--theta", qo.theta, "Initial theta (overrides --point)");
    qkt->add_option("--phi", qo.phi, "Initial phi (overrides --point)");
    auto* k_opt = qkt->add_option("--k", qo.k, "Chaoticity parameter")->capture_default_str();
    qkt->add_option("--k-preset", qo.k_preset, "regular|mixed|chaotic")->excludes(k_opt);
    qkt->add_option("--kicks", qo.kicks, "Number of kicks")->capture_default_str();
    qkt->add_option("--cells", qo.cells, "Cells read after each kick")->capture_default_str();
    qkt->add_option("--method", qo.method, "direct|circuit")->capture_default_str();
    qkt->add_option("--shots", qo.shots, "Shots per cell for circuit readout (0 = exact)")->capture_default_str();
    qkt->add_option("--seed", qo.seed, "RNG seed")->capture_default_str();
    qkt->add_option("--format", qo.format, "csv|json (JSON lines)")->capture_default_str();
    add_out(qkt);

    PortraitOptions po;
    auto* portrait = app.add_subcommand("portrait", "Classical kicked-top stroboscopic phase portrait");
    auto* pk_opt = portrait->add_option("--k", po.k, "Chaoticity parameter")->capture_default_str();
    portrait->add_option("--k-preset", po.k_preset, "regular|mixed|chaotic")->excludes(pk_opt);
    portrait->add_option("--grid", po.grid, "<n_theta>x<n_phi> seed grid")->capture_default_str();
    portrait->add_option("--seeds", po.seeds, "Explicit seeds theta,phi;theta,phi (overrides --grid)");
    portrait->add_option("--steps", po.steps, "Steps per seed")->capture_default_str();
    add_out(portrait);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        std::string content;
        const CLI::App* sub = app.get_subcommands().front();
        if (sub == wigner) {
            content = render_wigner(wo);
        } else if (sub == sparsity_cmd) {
            content = render_sparsity(so);
        } else if (sub == qkt) {
            content = render_qkt(qo);
        } else {
            content = render_portrait(po);
        }
        if (out_path.empty()) {
            out << content;
        } else {
            write_atomically(resolve_output(out_path), content);
        }
        return 0;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const swpst::Error& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "fatal: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace swpst::cli

#pragma once

// CSV and JSON encodings.
//
// CSV: '.' decimals, ',' separators, LF line endings, row = q, column = p.
// Numbers are written with 12 significant digits and magnitudes below 5e-13
// snapped to zero, so exact readouts that differ only by rounding serialize
// identically.

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "swpst/errors.hpp"
#include "swpst/kicked_top.hpp"
#include "swpst/phase_space.hpp"
#include "swpst/states.hpp"
#include "swpst/tomography.hpp"

namespace swpst::io {

using json = nlohmann::ordered_json;

inline std::string format_real(double v) {
    if (std::abs(v) < 5e-13) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string matrix_csv(const RealMatrix& m) {
    std::string out;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c > 0) out += ',';
            out += format_real(m(r, c));
        }
        out += '\n';
    }
    return out;
}

inline std::string wigner_csv(const WignerMatrix& w) { return matrix_csv(w.quadrant()); }
inline std::string full_grid_csv(const WignerMatrix& w) { return matrix_csv(expand_full(w)); }

/// Parses a square CSV block (comment lines starting with '#' and blank lines
/// are skipped).
inline WignerMatrix wigner_from_csv(std::string_view text) {
    std::vector<std::vector<double>> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw InvalidArgument("not a number in Wigner CSV: '" + cell + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    const auto n = static_cast<Eigen::Index>(rows.size());
    RealMatrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        if (static_cast<Eigen::Index>(rows[r].size()) != n) throw InvalidDimension("Wigner CSV is not square");
        for (Eigen::Index c = 0; c < n; ++c) m(r, c) = rows[r][c];
    }
    return WignerMatrix(std::move(m));
}

inline json to_json(const RealMatrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

/// {"dim": N, "quadrant": [[...]]}
inline json to_json(const WignerMatrix& w) { return json{{"dim", w.dim()}, {"quadrant", to_json(w.quadrant())}}; }

inline WignerMatrix wigner_from_json(const json& j) {
    try {
        const int dim = j.at("dim").get<int>();
        const auto& rows = j.at("quadrant");
        if (dim < 1 || rows.size() != static_cast<std::size_t>(dim)) throw InvalidDimension("quadrant row count != dim");
        RealMatrix m(dim, dim);
        for (int r = 0; r < dim; ++r) {
            if (rows[r].size() != static_cast<std::size_t>(dim)) throw InvalidDimension("quadrant is not square");
            for (int c = 0; c < dim; ++c) m(r, c) = rows[r][c].get<double>();
        }
        return WignerMatrix(std::move(m));
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed Wigner JSON: ") + e.what());
    }
}

/// [[re, im], ...]
inline json to_json(const PureState& s) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < s.dim(); ++i) arr.push_back(json::array({s[i].real(), s[i].imag()}));
    return arr;
}

inline PureState state_from_json(const json& j) {
    try {
        ComplexVector v(static_cast<Eigen::Index>(j.size()));
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (j[i].size() != 2) throw InvalidArgument("amplitude must be a [re, im] pair");
            v(static_cast<Eigen::Index>(i)) = Complex(j[i][0].get<double>(), j[i][1].get<double>());
        }
        return PureState(std::move(v));
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed state JSON: ") + e.what());
    }
}

inline json cells_json(const TomographyResult& r) {
    json cells = json::array();
    for (const auto& e : r.estimates) cells.push_back(json{{"q", e.cell.q}, {"p", e.cell.p}, {"w", e.w}});
    return cells;
}

/// {"method": ..., "shots": ..., "cells": [{"q", "p", "w"}]}, plus "seed" for
/// sampled readouts.
inline json to_json(const TomographyResult& r) {
    json j{{"method", std::string(to_string(r.method))}, {"shots", r.shots}, {"cells", cells_json(r)}};
    if (r.seed) j["seed"] = *r.seed;
    return j;
}

/// Quadrant layout with unselected cells left empty. Selections reaching
/// outside G_N use the full 2N x 2N layout.
inline std::string tomography_csv(const TomographyResult& r) {
    bool outside = false;
    for (const auto& e : r.estimates) outside = outside || e.cell.q >= r.dim || e.cell.p >= r.dim;
    const int side = outside ? 2 * r.dim : r.dim;
    std::vector<std::string> grid(static_cast<std::size_t>(side) * side);
    for (const auto& e : r.estimates) grid[static_cast<std::size_t>(e.cell.q) * side + e.cell.p] = format_real(e.w);
    std::string out;
    for (int q = 0; q < side; ++q) {
        for (int p = 0; p < side; ++p) {
            if (p > 0) out += ',';
            out += grid[static_cast<std::size_t>(q) * side + p];
        }
        out += '\n';
    }
    return out;
}

/// {"t": ..., "cells": [...], "S": ...}
inline json to_json(const KickRecord& rec) {
    return json{{"t", rec.t}, {"cells", cells_json(rec.readout)}, {"S", rec.signature}};
}

inline std::string qkt_csv_columns(const CellSelection& sel) {
    std::string out = "t";
    for (const auto& c : sel.cells()) out += ",W(" + std::to_string(c.q) + ";" + std::to_string(c.p) + ")";
    return out + ",S";
}

inline std::string qkt_csv_row(const KickRecord& rec) {
    std::string out = std::to_string(rec.t);
    for (const auto& e : rec.readout.estimates) out += "," + format_real(e.w);
    return out + "," + format_real(rec.signature) + "\n";
}

/// seed_id,step,theta,phi rows; steps count from 1.
inline std::string portrait_csv(const std::vector<std::vector<SphericalPoint>>& portrait) {
    std::string out;
    for (std::size_t id = 0; id < portrait.size(); ++id) {
        for (std::size_t step = 0; step < portrait[id].size(); ++step) {
            const auto& pt = portrait[id][step];
            out += std::to_string(id) + "," + std::to_string(step + 1) + "," + format_real(pt.theta) + "," +
                   format_real(pt.phi) + "\n";
        }
    }
    return out;
}

}  // namespace swpst::io

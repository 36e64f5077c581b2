#pragma once

// Wigner readout: direct traces, simulation of the ancilla interferometer, and
// selective readout over a chosen set of cells. Also pruning and sparsity.
//
// The interferometer prepares the ancilla in |0>, applies H, a controlled
// 2N A(q,p) on the system, H again, and measures Z on the ancilla, so that
// <Z> = Re Tr[2N A(q,p) rho] = 2N W(q,p).

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "swpst/errors.hpp"
#include "swpst/phase_space.hpp"
#include "swpst/qmat.hpp"

namespace swpst {

struct Cell {
    int q = 0;
    int p = 0;
    friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Ordered set of cells to read. Cells may lie anywhere in G_2N; two cells that
/// fold to the same G_N representative are rejected.
class CellSelection {
public:
    explicit CellSelection(int dim) : dim_(dim) {
        if (dim < 2) throw InvalidDimension("cell selection needs N >= 2");
    }

    CellSelection& add(int q, int p) {
        const auto f = fold_cell(q, p, dim_);
        for (const auto& c : cells_) {
            const auto g = fold_cell(c.q, c.p, dim_);
            if (g.q == f.q && g.p == f.p) {
                throw InvalidArgument("cell (" + std::to_string(q) + "," + std::to_string(p) +
                                      ") duplicates (" + std::to_string(c.q) + "," + std::to_string(c.p) +
                                      ") after folding");
            }
        }
        cells_.push_back({q, p});
        return *this;
    }

    /// Every cell of G_N in row-major order.
    static CellSelection all(int dim) {
        CellSelection s(dim);
        for (int q = 0; q < dim; ++q)
            for (int p = 0; p < dim; ++p) s.cells_.push_back({q, p});
        return s;
    }

    /// Row q of G_N: (q, 0), ..., (q, N-1).
    static CellSelection row(int q, int dim) {
        CellSelection s(dim);
        for (int p = 0; p < dim; ++p) s.add(q, p);
        return s;
    }

    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] const std::vector<Cell>& cells() const { return cells_; }
    [[nodiscard]] std::size_t size() const { return cells_.size(); }
    [[nodiscard]] bool covers_quadrant() const {
        if (cells_.size() != static_cast<std::size_t>(dim_) * dim_) return false;
        return std::all_of(cells_.begin(), cells_.end(), [&](const Cell& c) { return c.q < dim_ && c.p < dim_; });
    }

private:
    int dim_;
    std::vector<Cell> cells_;
};

enum class ReadoutMethod { direct, circuit_exact, circuit_sampled };

inline std::string_view to_string(ReadoutMethod m) {
    switch (m) {
        case ReadoutMethod::direct: return "direct";
        case ReadoutMethod::circuit_exact: return "circuit-exact";
        case ReadoutMethod::circuit_sampled: return "circuit-sampled";
    }
    return "unknown";
}

struct CellEstimate {
    Cell cell;
    double w = 0.0;
    double standard_error = 0.0;  // zero for exact methods
};

struct TomographyResult {
    int dim = 0;
    ReadoutMethod method = ReadoutMethod::direct;
    std::uint64_t shots = 0;
    std::optional<std::uint64_t> seed;
    std::vector<CellEstimate> estimates;  // selection order

    [[nodiscard]] std::optional<double> value(int q, int p) const {
        for (const auto& e : estimates)
            if (e.cell.q == q && e.cell.p == p) return e.w;
        return std::nullopt;
    }

    [[nodiscard]] double sum() const {
        double s = 0.0;
        for (const auto& e : estimates) s += e.w;
        return s;
    }
};

namespace detail {
inline void check_dims(const PhaseSpaceFrame& frame, const DensityMatrix& rho, const CellSelection& sel) {
    if (rho.dim() != frame.dim() || sel.dim() != frame.dim()) {
        throw DimensionMismatch("frame N=" + std::to_string(frame.dim()) + ", state N=" + std::to_string(rho.dim()) +
                                ", selection N=" + std::to_string(sel.dim()));
    }
}
}  // namespace detail

/// Exact Tr[A(q,p) rho] for the selected cells only.
inline TomographyResult direct_read(const PhaseSpaceFrame& frame, const DensityMatrix& rho, const CellSelection& sel) {
    detail::check_dims(frame, rho, sel);
    TomographyResult out{frame.dim(), ReadoutMethod::direct, 0, std::nullopt, {}};
    out.estimates.reserve(sel.size());
    for (const auto& c : sel.cells()) {
        const auto f = fold_cell(c.q, c.p, frame.dim());
        out.estimates.push_back({c, f.sign * wigner_cell(frame, rho, f.q, f.p), 0.0});
    }
    return out;
}

/// Ancilla expectation values of the interferometer for a controlled unitary
/// `u` acting on `rho`. `real` is <Z> after H . CU . H; `imag` is the same with
/// an S^dagger on the ancilla before the second H.
struct InterferometerReadout {
    double real = 0.0;
    double imag = 0.0;
};

inline InterferometerReadout simulate_interferometer(const ComplexMatrix& u, const ComplexMatrix& rho) {
    const auto n = rho.rows();
    const double s = 1.0 / std::sqrt(2.0);
    ComplexMatrix hadamard(2, 2);
    hadamard << s, s, s, -s;
    ComplexMatrix s_dagger = ComplexMatrix::Zero(2, 2);
    s_dagger(0, 0) = 1.0;
    s_dagger(1, 1) = Complex(0.0, -1.0);

    ComplexMatrix ancilla0 = ComplexMatrix::Zero(2, 2);
    ancilla0(0, 0) = 1.0;
    const ComplexMatrix initial = tensor(ancilla0, rho);

    ComplexMatrix controlled = identity(2 * n);
    controlled.block(n, n, n, n) = u;
    const ComplexMatrix h_sys = tensor(hadamard, identity(n));

    ComplexMatrix z(2, 2);
    z << 1.0, 0.0, 0.0, -1.0;
    const ComplexMatrix z_sys = tensor(z, identity(n));

    const ComplexMatrix first = controlled * h_sys;
    const ComplexMatrix re_circuit = h_sys * first;
    const ComplexMatrix im_circuit = h_sys * tensor(s_dagger, identity(n)) * first;

    const auto expect = [&](const ComplexMatrix& c) {
        return trace_of_product(z_sys, c * initial * c.adjoint()).real();
    };
    return {expect(re_circuit), expect(im_circuit)};
}

/// Simulated interferometric readout. With shots == 0 returns the exact
/// expectation; otherwise each cell's ancilla outcomes are drawn from the Born
/// distribution p(+-) = (1 +- <Z>)/2 with a per-cell stream derived from
/// (seed, q, p).
inline TomographyResult circuit_read(const PhaseSpaceFrame& frame, const DensityMatrix& rho, const CellSelection& sel,
                                     std::uint64_t shots, std::uint64_t seed = 0) {
    detail::check_dims(frame, rho, sel);
    const int n = frame.dim();
    const double scale = 2.0 * n;
    TomographyResult out{n, shots == 0 ? ReadoutMethod::circuit_exact : ReadoutMethod::circuit_sampled, shots,
                         shots == 0 ? std::nullopt : std::optional<std::uint64_t>(seed), {}};
    out.estimates.reserve(sel.size());

    for (const auto& c : sel.cells()) {
        const auto f = fold_cell(c.q, c.p, n);
        const ComplexMatrix u = static_cast<double>(f.sign) * frame.point_unitary(f.q, f.p);
        const double dev = unitarity_deviation(u);
        if (dev > tol::unitary) {
            throw NonUnitaryPointOperator("2N A(" + std::to_string(f.q) + "," + std::to_string(f.p) +
                                          ") deviates from unitary by " + std::to_string(dev));
        }
        const auto readout = simulate_interferometer(u, rho.matrix());
#ifndef NDEBUG
        if (std::abs(readout.imag) > 1e-8) {
            throw NonNegligibleImaginaryPart("imaginary interferometer quadrature " + std::to_string(readout.imag));
        }
#endif
        if (shots == 0) {
            out.estimates.push_back({c, readout.real / scale, 0.0});
            continue;
        }
        const double p_plus = std::clamp((1.0 + readout.real) / 2.0, 0.0, 1.0);
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(c.q), static_cast<std::uint32_t>(c.p)};
        std::mt19937_64 rng(seq);
        std::binomial_distribution<std::uint64_t> outcomes(shots, p_plus);
        const auto n_plus = outcomes(rng);
        const double z_hat = (2.0 * static_cast<double>(n_plus) - static_cast<double>(shots)) / static_cast<double>(shots);
        const double se = std::sqrt(p_plus * (1.0 - p_plus) / static_cast<double>(shots)) * 2.0 / scale;
        out.estimates.push_back({c, z_hat / scale, se});
    }
    return out;
}

/// Zeroes entries with |W| < threshold * max|W|.
inline WignerMatrix prune(const WignerMatrix& w, double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw InvalidArgument("pruning threshold must lie in [0, 1], got " + std::to_string(threshold));
    }
    const double cutoff = threshold * w.quadrant().cwiseAbs().maxCoeff();
    RealMatrix out = w.quadrant();
    for (Eigen::Index i = 0; i < out.size(); ++i)
        if (std::abs(out(i)) < cutoff) out(i) = 0.0;
    return WignerMatrix(std::move(out));
}

/// Fraction of entries with magnitude below threshold * (largest magnitude).
template <typename Derived>
double sparsity(const Eigen::MatrixBase<Derived>& m, double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw InvalidArgument("sparsity threshold must lie in [0, 1], got " + std::to_string(threshold));
    }
    if (m.size() == 0) return 0.0;
    const auto mags = m.cwiseAbs().eval();
    const double cutoff = threshold * mags.maxCoeff();
    Eigen::Index below = 0;
    for (Eigen::Index i = 0; i < mags.size(); ++i)
        if (mags(i) < cutoff) ++below;
    return static_cast<double>(below) / static_cast<double>(mags.size());
}

inline double sparsity(const WignerMatrix& w, double threshold) { return sparsity(w.quadrant(), threshold); }

}  // namespace swpst

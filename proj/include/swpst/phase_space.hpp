#pragma once

// Even-dimensional discrete Wigner phase space.
//
// A Hilbert space of dimension N maps onto a 2N x 2N grid G_2N of phase-space
// points. Only the (0,0) quadrant G_N carries independent information; the other
// three quadrants follow from
//
//     A(q + s_q N, p + s_p N) = A(q, p) (-1)^(s_p q + s_q p + s_q s_p N),
//
// and W inherits the same rule. Everything here stores the quadrant and derives
// the rest on demand.

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "swpst/errors.hpp"
#include "swpst/qmat.hpp"

namespace swpst {

/// A cell of the full grid folded back to G_N.
struct FoldedCell {
    int q = 0;
    int p = 0;
    int sign = 1;
};

/// Maps (q, p) in G_2N to its G_N representative and the sign picked up.
inline FoldedCell fold_cell(int q, int p, int dim) {
    if (q < 0 || p < 0 || q >= 2 * dim || p >= 2 * dim) {
        throw IndexOutOfRange("cell (" + std::to_string(q) + "," + std::to_string(p) + ") outside G_2N for N=" +
                              std::to_string(dim));
    }
    const int sq = q / dim;
    const int sp = p / dim;
    const int q0 = q % dim;
    const int p0 = p % dim;
    const int exponent = sp * q0 + sq * p0 + sq * sp * dim;
    return {q0, p0, (exponent % 2 == 0) ? 1 : -1};
}

class PhaseSpaceFrame {
public:
    explicit PhaseSpaceFrame(int dim) : dim_(dim) {
        if (dim < 2) throw InvalidDimension("phase space needs N >= 2, got " + std::to_string(dim));
        const auto n = static_cast<Eigen::Index>(dim);
        const double two_pi = 2.0 * std::numbers::pi;

        qft_.resize(n, n);
        for (Eigen::Index r = 0; r < n; ++r)
            for (Eigen::Index c = 0; c < n; ++c)
                qft_(r, c) = std::polar(1.0 / std::sqrt(static_cast<double>(dim)),
                                        two_pi * static_cast<double>(r * c) / dim);

        shift_ = ComplexMatrix::Zero(n, n);
        reflection_ = ComplexMatrix::Zero(n, n);
        for (Eigen::Index k = 0; k < n; ++k) {
            shift_((k + 1) % n, k) = 1.0;
            reflection_((n - k) % n, k) = 1.0;
        }
        boost_ = qft_ * shift_ * qft_.adjoint();

        // U^q R V^{-p} for q, p in G_N.
        std::vector<ComplexMatrix> shift_pow(dim);
        std::vector<ComplexMatrix> boost_inv_pow(dim);
        shift_pow[0] = identity(n);
        boost_inv_pow[0] = identity(n);
        const ComplexMatrix boost_inv = boost_.adjoint();
        for (int k = 1; k < dim; ++k) {
            shift_pow[k] = shift_ * shift_pow[k - 1];
            boost_inv_pow[k] = boost_inv * boost_inv_pow[k - 1];
        }
        point_ops_.reserve(static_cast<std::size_t>(dim) * dim);
        for (int q = 0; q < dim; ++q) {
            for (int p = 0; p < dim; ++p) {
                const Complex phase = std::polar(1.0, std::numbers::pi * p * q / dim) / (2.0 * dim);
                ComplexMatrix a = phase * (shift_pow[q] * reflection_ * boost_inv_pow[p]);
                const double dev = hermiticity_deviation(a);
                if (dev > tol::hermitian) {
                    throw NotHermitian("A(" + std::to_string(q) + "," + std::to_string(p) + ") deviates by " +
                                       std::to_string(dev));
                }
                point_ops_.push_back(std::move(a));
            }
        }
    }

    [[nodiscard]] int dim() const { return dim_; }
    /// Columns are momentum states: qft(n, k) = exp(i 2 pi n k / N) / sqrt(N).
    [[nodiscard]] const ComplexMatrix& qft() const { return qft_; }
    /// U|n> = |n + 1 mod N>.
    [[nodiscard]] const ComplexMatrix& shift() const { return shift_; }
    /// V|k> = |k + 1 mod N> in the momentum basis; diagonal in position.
    [[nodiscard]] const ComplexMatrix& boost() const { return boost_; }
    /// R|n> = |N - n mod N>.
    [[nodiscard]] const ComplexMatrix& reflection() const { return reflection_; }

    /// A(q, p) for (q, p) in G_N.
    [[nodiscard]] const ComplexMatrix& point_operator(int q, int p) const {
        check_quadrant(q, p);
        return point_ops_[static_cast<std::size_t>(q) * dim_ + p];
    }

    /// A(q, p) for (q, p) anywhere in G_2N.
    [[nodiscard]] ComplexMatrix point_operator_full(int q, int p) const {
        const auto f = fold_cell(q, p, dim_);
        return static_cast<double>(f.sign) * point_operator(f.q, f.p);
    }

    /// 2N A(q, p): the unitary (and Hermitian) part of the point operator.
    [[nodiscard]] ComplexMatrix point_unitary(int q, int p) const {
        return (2.0 * dim_) * point_operator(q, p);
    }

private:
    void check_quadrant(int q, int p) const {
        if (q < 0 || p < 0 || q >= dim_ || p >= dim_) {
            throw IndexOutOfRange("cell (" + std::to_string(q) + "," + std::to_string(p) + ") outside G_N for N=" +
                                  std::to_string(dim_));
        }
    }

    int dim_;
    ComplexMatrix qft_;
    ComplexMatrix shift_;
    ComplexMatrix boost_;
    ComplexMatrix reflection_;
    std::vector<ComplexMatrix> point_ops_;  // row-major over (q, p)
};

inline PhaseSpaceFrame build_frame(int dim) { return PhaseSpaceFrame(dim); }

/// W over the quadrant G_N; row index q, column index p.
class WignerMatrix {
public:
    explicit WignerMatrix(RealMatrix quadrant) : quadrant_(std::move(quadrant)) {
        if (quadrant_.rows() != quadrant_.cols() || quadrant_.rows() < 1) {
            throw InvalidDimension("Wigner quadrant must be square and non-empty");
        }
        if (!quadrant_.allFinite()) throw InvalidArgument("Wigner quadrant has non-finite entries");
    }

    [[nodiscard]] int dim() const { return static_cast<int>(quadrant_.rows()); }
    [[nodiscard]] const RealMatrix& quadrant() const { return quadrant_; }
    [[nodiscard]] double operator()(int q, int p) const { return quadrant_(q, p); }

    /// W at any (q, p) in G_2N.
    [[nodiscard]] double full(int q, int p) const {
        const auto f = fold_cell(q, p, dim());
        return f.sign * quadrant_(f.q, f.p);
    }

    friend bool operator==(const WignerMatrix& a, const WignerMatrix& b) { return a.quadrant_ == b.quadrant_; }

private:
    RealMatrix quadrant_;
};

namespace detail {
inline constexpr double imag_reject = 1e-8;

inline double real_trace_or_throw(Complex tr, int q, int p) {
    const double residue = std::abs(tr.imag());
    if (residue > imag_reject) {
        throw NonNegligibleImaginaryPart("Tr[A(" + std::to_string(q) + "," + std::to_string(p) +
                                         ") rho] has imaginary part " + std::to_string(tr.imag()));
    }
    return tr.real();
}
}  // namespace detail

/// Re Tr[A(q, p) rho] for a single cell of G_N.
inline double wigner_cell(const PhaseSpaceFrame& frame, const DensityMatrix& rho, int q, int p) {
    if (rho.dim() != frame.dim()) {
        throw DimensionMismatch("state dimension " + std::to_string(rho.dim()) + " vs frame dimension " +
                                std::to_string(frame.dim()));
    }
    return detail::real_trace_or_throw(trace_of_product(frame.point_operator(q, p), rho.matrix()), q, p);
}

inline WignerMatrix wigner_transform(const PhaseSpaceFrame& frame, const DensityMatrix& rho) {
    const int n = frame.dim();
    if (rho.dim() != n) {
        throw DimensionMismatch("state dimension " + std::to_string(rho.dim()) + " vs frame dimension " +
                                std::to_string(n));
    }
    RealMatrix quadrant(n, n);
    for (int q = 0; q < n; ++q)
        for (int p = 0; p < n; ++p) quadrant(q, p) = wigner_cell(frame, rho, q, p);
    return WignerMatrix(std::move(quadrant));
}

/// The full 2N x 2N grid.
inline RealMatrix expand_full(const WignerMatrix& w) {
    const int n = w.dim();
    RealMatrix full(2 * n, 2 * n);
    for (int q = 0; q < 2 * n; ++q)
        for (int p = 0; p < 2 * n; ++p) full(q, p) = w.full(q, p);
    return full;
}

/// rho = N * sum over G_2N of W(q, p) A(q, p).
inline constexpr double reconstruction_scale(int dim) { return static_cast<double>(dim); }

/// Result of inverting a Wigner matrix. Pruned or otherwise inconsistent
/// quadrants still invert to a Hermitian matrix; `positive()` says whether that
/// matrix is a state.
struct Reconstruction {
    ComplexMatrix matrix;
    double min_eigenvalue = 0.0;

    static constexpr double positivity_floor = 1e-8;

    [[nodiscard]] bool positive() const { return min_eigenvalue >= -positivity_floor; }
    [[nodiscard]] double trace() const { return matrix.trace().real(); }

    /// The reconstructed matrix as a validated state; throws
    /// ReconstructionNotPositive for flagged non-states.
    [[nodiscard]] DensityMatrix state() const {
        if (!positive()) {
            throw ReconstructionNotPositive("reconstructed matrix has eigenvalue " + std::to_string(min_eigenvalue));
        }
        return DensityMatrix(matrix);
    }
};

inline Reconstruction reconstruct(const PhaseSpaceFrame& frame, const WignerMatrix& w) {
    const int n = frame.dim();
    if (w.dim() != n) throw DimensionMismatch("Wigner dimension does not match frame");
    const RealMatrix full = expand_full(w);
    ComplexMatrix rho = ComplexMatrix::Zero(n, n);
    for (int q = 0; q < 2 * n; ++q)
        for (int p = 0; p < 2 * n; ++p)
            if (full(q, p) != 0.0) rho += full(q, p) * frame.point_operator_full(q, p);
    rho *= reconstruction_scale(n);
    rho = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho, Eigen::EigenvaluesOnly);
    return {std::move(rho), solver.eigenvalues().minCoeff()};
}

struct Marginals {
    RealVector position;  // <n|rho|n>
    RealVector momentum;  // <k|rho|k>
};

/// Line sums over the full grid: position[n] sums row q = 2n, momentum[k]
/// sums column p = 2k.
inline Marginals marginals(const WignerMatrix& w) {
    const int n = w.dim();
    Marginals m{RealVector::Zero(n), RealVector::Zero(n)};
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < 2 * n; ++j) {
            m.position(i) += w.full(2 * i, j);
            m.momentum(i) += w.full(j, 2 * i);
        }
    }
    return m;
}

/// Tr[rho_1 rho_2] = 4N sum over G_N of W_1 W_2.
inline double wigner_fidelity(const WignerMatrix& a, const WignerMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("Wigner matrices have different dimensions");
    return 4.0 * a.dim() * a.quadrant().cwiseProduct(b.quadrant()).sum();
}

}  // namespace swpst

#pragma once

// Dense complex linear algebra for small Hilbert spaces (N up to a few hundred).
//
// ComplexMatrix is Eigen's dynamic complex matrix; this header adds the
// handful of operations the phase-space code needs on top of it, plus the
// validated DensityMatrix value type.

#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "swpst/errors.hpp"

namespace swpst {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

namespace tol {
inline constexpr double hermitian = 1e-12;     // stored operators and states
inline constexpr double generator = 1e-10;     // input to expm_hermitian_generator
inline constexpr double trace = 1e-12;
inline constexpr double psd_floor = 1e-10;     // smallest admissible eigenvalue is -psd_floor
inline constexpr double unitary = 1e-10;
inline constexpr double norm = 1e-12;
}  // namespace tol

inline ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

inline double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// max |M - M^dagger| entrywise.
inline double hermiticity_deviation(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) return INFINITY;
    return max_abs(m - m.adjoint());
}

/// max |U^dagger U - I| entrywise.
inline double unitarity_deviation(const ComplexMatrix& u) {
    if (u.rows() != u.cols()) return INFINITY;
    return max_abs(u.adjoint() * u - identity(u.rows()));
}

inline bool all_finite(const ComplexMatrix& m) { return m.allFinite(); }

/// Kronecker product; `a` indexes the slow axis.
inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline ComplexVector tensor(const ComplexVector& a, const ComplexVector& b) {
    ComplexVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

/// Tr[a^dagger b].
inline Complex frobenius_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionMismatch("frobenius_inner: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    }
    return (a.conjugate().cwiseProduct(b)).sum();
}

/// Tr[a b] without forming the product.
inline Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows() || a.rows() != b.cols()) throw DimensionMismatch("trace_of_product: shapes not conformable");
    return (a.transpose().cwiseProduct(b)).sum();
}

struct HermitianEigen {
    RealVector values;      // ascending
    ComplexMatrix vectors;  // columns are eigenvectors
};

/// Spectral decomposition of a Hermitian matrix. Throws NotHermitian when
/// the input deviates from its adjoint by more than `tolerance`.
inline HermitianEigen hermitian_eigen(const ComplexMatrix& h, double tolerance = tol::generator) {
    const double dev = hermiticity_deviation(h);
    if (!(dev <= tolerance)) {
        throw NotHermitian("matrix deviates from its adjoint by " + std::to_string(dev));
    }
    const ComplexMatrix sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
    return {solver.eigenvalues(), solver.eigenvectors()};
}

/// exp(-i t H) for Hermitian H, assembled from the spectral decomposition.
inline ComplexMatrix expm_hermitian_generator(const ComplexMatrix& h, double t) {
    const auto eig = hermitian_eigen(h);
    ComplexVector phases(eig.values.size());
    for (Eigen::Index i = 0; i < phases.size(); ++i) phases(i) = std::polar(1.0, -t * eig.values(i));
    return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

/// A validated quantum state: Hermitian, unit trace, positive semidefinite.
///
/// The constructor accepts input within tol::generator of Hermitian and stores
/// (M + M^dagger)/2, which is Hermitian to rounding.
class DensityMatrix {
public:
    explicit DensityMatrix(const ComplexMatrix& m) {
        if (m.rows() != m.cols() || m.rows() == 0) {
            throw InvalidDimension("density matrix must be square and non-empty");
        }
        if (!all_finite(m)) throw InvalidArgument("density matrix has non-finite entries");
        const double dev = hermiticity_deviation(m);
        if (dev > tol::generator) throw NotHermitian("density matrix deviates from Hermitian by " + std::to_string(dev));
        matrix_ = 0.5 * (m + m.adjoint());
        const Complex tr = matrix_.trace();
        if (std::abs(tr - Complex(1.0, 0.0)) > tol::trace) {
            throw InvalidTrace("density matrix trace is " + std::to_string(tr.real()));
        }
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(matrix_, Eigen::EigenvaluesOnly);
        const double min_eig = solver.eigenvalues().minCoeff();
        if (min_eig < -tol::psd_floor) {
            throw NotPositive("density matrix has eigenvalue " + std::to_string(min_eig));
        }
    }

    /// |psi><psi| after normalizing psi.
    static DensityMatrix pure(const ComplexVector& psi) {
        const double n = psi.norm();
        if (!(n > 0.0)) throw InvalidArgument("cannot build a state from the zero vector");
        const ComplexVector v = psi / n;
        return DensityMatrix(v * v.adjoint());
    }

    static DensityMatrix maximally_mixed(Eigen::Index dim) {
        if (dim < 1) throw InvalidDimension("dimension must be positive");
        return DensityMatrix(identity(dim) / static_cast<double>(dim));
    }

    [[nodiscard]] Eigen::Index dim() const { return matrix_.rows(); }
    [[nodiscard]] const ComplexMatrix& matrix() const { return matrix_; }
    [[nodiscard]] Complex operator()(Eigen::Index r, Eigen::Index c) const { return matrix_(r, c); }
    [[nodiscard]] double purity() const { return frobenius_inner(matrix_, matrix_).real(); }

    /// U rho U^dagger.
    [[nodiscard]] DensityMatrix evolved(const ComplexMatrix& u) const {
        if (u.rows() != dim() || u.cols() != dim()) throw DimensionMismatch("unitary does not match state dimension");
        return DensityMatrix(u * matrix_ * u.adjoint());
    }

private:
    ComplexMatrix matrix_;
};

}  // namespace swpst

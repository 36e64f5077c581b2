#pragma once

// State factories: basis, product and Bell states, spin coherent states,
// harmonic (QFT) states and their amplitude-randomized variants, and
// pseudopure mixtures.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <utility>

#include "swpst/errors.hpp"
#include "swpst/qmat.hpp"

namespace swpst {

/// Normalized state vector.
class PureState {
public:
    /// Takes amplitudes that are already normalized (within tol::norm).
    explicit PureState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
        if (amplitudes_.size() == 0) throw InvalidDimension("state vector is empty");
        if (!amplitudes_.allFinite()) throw InvalidArgument("state vector has non-finite entries");
        const double n = amplitudes_.norm();
        if (std::abs(n - 1.0) > tol::norm) throw InvalidArgument("state vector has norm " + std::to_string(n));
    }

    static PureState normalized(const ComplexVector& v) {
        const double n = v.norm();
        if (!(n > 0.0)) throw InvalidArgument("cannot normalize the zero vector");
        return PureState(v / n);
    }

    [[nodiscard]] Eigen::Index dim() const { return amplitudes_.size(); }
    [[nodiscard]] const ComplexVector& amplitudes() const { return amplitudes_; }
    [[nodiscard]] Complex operator[](Eigen::Index i) const { return amplitudes_(i); }
    [[nodiscard]] DensityMatrix density() const { return DensityMatrix(amplitudes_ * amplitudes_.adjoint()); }

private:
    ComplexVector amplitudes_;
};

inline PureState basis_state(int n, int dim) {
    if (dim < 1) throw InvalidDimension("dimension must be positive");
    if (n < 0 || n >= dim) {
        throw IndexOutOfRange("basis index " + std::to_string(n) + " outside [0, " + std::to_string(dim) + ")");
    }
    ComplexVector v = ComplexVector::Zero(dim);
    v(n) = 1.0;
    return PureState(std::move(v));
}

/// |++> on two qubits.
inline PureState plus_plus() { return PureState(ComplexVector::Constant(4, Complex(0.5, 0.0))); }

/// (|00> + |11>)/sqrt(2).
inline PureState bell_state() {
    ComplexVector v = ComplexVector::Zero(4);
    v(0) = v(3) = 1.0 / std::numbers::sqrt2;
    return PureState(std::move(v));
}

/// cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
inline PureState spin_coherent(double theta, double phi) {
    ComplexVector v(2);
    v(0) = std::cos(theta / 2.0);
    v(1) = std::polar(std::sin(theta / 2.0), phi);
    return PureState::normalized(v);
}

/// |theta,phi><theta,phi| tensor |theta,phi><theta,phi| on the two system qubits.
inline DensityMatrix two_qubit_scs(double theta, double phi) {
    const ComplexVector v = spin_coherent(theta, phi).amplitudes();
    const ComplexMatrix single = v * v.adjoint();
    return DensityMatrix(tensor(single, single));
}

namespace detail {
inline PureState harmonic_with_magnitudes(int j, const RealVector& magnitudes) {
    const auto dim = magnitudes.size();
    ComplexVector v(dim);
    for (Eigen::Index n = 0; n < dim; ++n) {
        v(n) = std::polar(magnitudes(n), 2.0 * std::numbers::pi * static_cast<double>(n * j) / static_cast<double>(dim));
    }
    return PureState::normalized(v);
}

inline void check_harmonic_index(int j, int dim) {
    if (dim < 1) throw InvalidDimension("dimension must be positive");
    if (j < 0 || j >= dim) {
        throw IndexOutOfRange("harmonic index " + std::to_string(j) + " outside [0, " + std::to_string(dim) + ")");
    }
}
}  // namespace detail

/// QFT|j>: amplitudes exp(i 2 pi n j / N)/sqrt(N), i.e. the momentum state |k=j>.
inline PureState harmonic_state(int j, int dim) {
    detail::check_harmonic_index(j, dim);
    return detail::harmonic_with_magnitudes(j, RealVector::Ones(dim));
}

struct RandomizedHarmonicSpec {
    int j = 0;
    double eta = 0.0;
    std::uint64_t seed = 0;
};

/// Harmonic state whose magnitudes are scaled by r_n ~ U[1 - eta, 1 + eta],
/// drawn independently per n from a generator seeded by `spec.seed`.
inline PureState randomized_harmonic(const RandomizedHarmonicSpec& spec, int dim) {
    detail::check_harmonic_index(spec.j, dim);
    if (!(spec.eta >= 0.0 && spec.eta <= 1.0)) {
        throw InvalidArgument("randomization strength eta must lie in [0, 1], got " + std::to_string(spec.eta));
    }
    RealVector r = RealVector::Ones(dim);
    if (spec.eta > 0.0) {
        std::mt19937_64 rng(spec.seed);
        std::uniform_real_distribution<double> dist(1.0 - spec.eta, 1.0 + spec.eta);
        for (Eigen::Index n = 0; n < dim; ++n) r(n) = dist(rng);
    }
    return detail::harmonic_with_magnitudes(spec.j, r);
}

/// (1 - epsilon) I/N + epsilon rho_pure.
inline DensityMatrix pseudopure(const DensityMatrix& rho_pure, double epsilon) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
        throw InvalidEpsilon("purity factor must lie in [0, 1], got " + std::to_string(epsilon));
    }
    const auto n = rho_pure.dim();
    return DensityMatrix((1.0 - epsilon) * identity(n) / static_cast<double>(n) + epsilon * rho_pure.matrix());
}

}  // namespace swpst

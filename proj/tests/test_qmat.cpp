#include <catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "support/oracles.hpp"
#include "swpst/kicked_top.hpp"
#include "swpst/qmat.hpp"

using namespace swpst;
using Catch::Approx;

namespace {

ComplexMatrix pauli_x() {
    ComplexMatrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

ComplexMatrix diag2(double a, double b) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

}  // namespace

TEST_CASE("tensor: identity and projector products", "[qmat]") {
    REQUIRE(tensor(identity(2), identity(2)) == identity(4));

    const ComplexMatrix p = tensor(diag2(1, 0), diag2(1, 0));
    ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
    expected(0, 0) = 1.0;
    REQUIRE(p == expected);
}

TEST_CASE("tensor: sigma_x squared against direct multiplication", "[qmat]") {
    const ComplexMatrix xx = tensor(pauli_x(), pauli_x());
    REQUIRE(xx == oracle::kron(pauli_x(), pauli_x()));
    REQUIRE(xx * xx == identity(4));
}

TEST_CASE("tensor: slow axis is the first factor", "[qmat]") {
    ComplexMatrix a(2, 2);
    a << 1.0, 2.0, 3.0, 4.0;
    const ComplexMatrix t = tensor(a, identity(3));
    CHECK(t(0, 3) == Complex(2.0, 0.0));
    CHECK(t(3, 0) == Complex(3.0, 0.0));
    CHECK(t(4, 4) == Complex(4.0, 0.0));
}

TEST_CASE("tensor is associative", "[qmat][property]") {
    // Gaussian-integer entries keep every product exact.
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> digit(-9, 9);
    const auto random_integer = [&](int rows, int cols) {
        ComplexMatrix m(rows, cols);
        for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = Complex(digit(rng), digit(rng));
        return m;
    };
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix a = random_integer(2, 3);
        const ComplexMatrix b = random_integer(3, 2);
        const ComplexMatrix c = random_integer(2, 2);
        REQUIRE(max_abs(tensor(tensor(a, b), c) - tensor(a, tensor(b, c))) == 0.0);
    }
}

TEST_CASE("adjoint is an involution", "[qmat][property]") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix m = oracle::random_hermitian(5, rng) + Complex(0, 1) * oracle::random_hermitian(5, rng);
        REQUIRE(ComplexMatrix(m.adjoint().adjoint()) == m);
    }
}

TEST_CASE("expm_hermitian_generator: known cases", "[qmat]") {
    SECTION("zero generator") {
        for (double t : {0.0, 1.3, -7.0}) REQUIRE(max_abs(expm_hermitian_generator(ComplexMatrix::Zero(3, 3), t) - identity(3)) < 1e-15);
    }
    SECTION("sigma_z / 2 over 2 pi is -I") {
        const ComplexMatrix u = expm_hermitian_generator(diag2(0.5, -0.5), 2.0 * std::numbers::pi);
        REQUIRE(max_abs(u + identity(2)) < 1e-12);
    }
    SECTION("two-qubit J_x over 2 pi is identity up to a global phase") {
        const auto j = two_qubit_angular_momentum();
        const ComplexMatrix u = expm_hermitian_generator(j.x, 2.0 * std::numbers::pi);
        const Complex phase = u(0, 0);
        REQUIRE(std::abs(std::abs(phase) - 1.0) < 1e-12);
        REQUIRE(max_abs(u - phase * identity(4)) < 1e-12);

        // Power-series oracle at a small step, composed up to 2 pi.
        const int steps = 64;
        const oracle::Matrix step = oracle::expm_series(j.x, 2.0 * std::numbers::pi / steps);
        oracle::Matrix composed = oracle::Matrix::Identity(4, 4);
        for (int i = 0; i < steps; ++i) composed = step * composed;
        REQUIRE(oracle::max_abs(composed - u) < 1e-10);
    }
}

TEST_CASE("expm_hermitian_generator agrees with the Taylor oracle", "[qmat][property]") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> tdist(-3.0, 3.0);
    for (int trial = 0; trial < 30; ++trial) {
        const int dim = 2 + trial % 7;
        const ComplexMatrix h = oracle::random_hermitian(dim, rng);
        const double t = tdist(rng);
        const ComplexMatrix u = expm_hermitian_generator(h, t);
        REQUIRE(unitarity_deviation(u) < 1e-10);
        REQUIRE(oracle::max_abs(u - oracle::expm_series(h, t)) < 1e-9);
        REQUIRE(max_abs(u * expm_hermitian_generator(h, -t) - identity(dim)) < 1e-10);
    }
}

TEST_CASE("spectral decomposition reassembles the matrix", "[qmat][property]") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 30; ++trial) {
        const ComplexMatrix h = oracle::random_hermitian(2 + trial % 9, rng);
        const auto eig = hermitian_eigen(h);
        const ComplexMatrix back = eig.vectors * eig.values.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
        REQUIRE(max_abs(back - h) < 1e-10);
    }
}

TEST_CASE("expm_hermitian_generator rejects non-Hermitian input", "[qmat]") {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 1) = 1.0;
    REQUIRE_THROWS_AS(expm_hermitian_generator(m, 1.0), NotHermitian);
}

TEST_CASE("frobenius_inner", "[qmat]") {
    CHECK(frobenius_inner(identity(5), identity(5)) == Complex(5.0, 0.0));

    const DensityMatrix plus = DensityMatrix::pure(ComplexVector::Constant(2, 1.0));
    CHECK(frobenius_inner(plus.matrix(), plus.matrix()).real() == Approx(1.0).margin(1e-15));

    CHECK(frobenius_inner(diag2(1, 0), diag2(0, 1)) == Complex(0.0, 0.0));

    REQUIRE_THROWS_AS(frobenius_inner(identity(2), identity(3)), DimensionMismatch);
}

TEST_CASE("angular momentum algebra", "[qmat]") {
    const auto j = two_qubit_angular_momentum();
    const ComplexMatrix comm = j.x * j.y - j.y * j.x;
    REQUIRE(max_abs(comm - Complex(0.0, 1.0) * j.z) < 1e-12);
    // j(j+1) = 2 on the symmetric (triplet) subspace; singlet contributes 0.
    const ComplexMatrix casimir = j.x * j.x + j.y * j.y + j.z * j.z;
    CHECK(std::abs(casimir.trace() - Complex(6.0, 0.0)) < 1e-12);
}

TEST_CASE("DensityMatrix validation", "[qmat]") {
    SECTION("accepts and symmetrizes near-Hermitian input") {
        ComplexMatrix m = identity(2) / 2.0;
        m(0, 1) = Complex(0.0, 1e-13);
        const DensityMatrix rho(m);
        CHECK(hermiticity_deviation(rho.matrix()) == 0.0);
    }
    SECTION("rejects bad trace") { REQUIRE_THROWS_AS(DensityMatrix(identity(2)), InvalidTrace); }
    SECTION("rejects non-Hermitian") {
        ComplexMatrix m = identity(2) / 2.0;
        m(0, 1) = 0.3;
        REQUIRE_THROWS_AS(DensityMatrix(m), NotHermitian);
    }
    SECTION("rejects negative eigenvalues") {
        REQUIRE_THROWS_AS(DensityMatrix(diag2(1.5, -0.5)), NotPositive);
    }
    SECTION("rejects non-square") { REQUIRE_THROWS_AS(DensityMatrix(ComplexMatrix::Zero(2, 3)), InvalidDimension); }
    SECTION("maximally mixed") {
        const auto rho = DensityMatrix::maximally_mixed(4);
        CHECK(rho.purity() == Approx(0.25));
    }
}

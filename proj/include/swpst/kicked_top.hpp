#pragma once

// Quantum kicked top on two qubits (spin j = 1 in the symmetric subspace) with
// selective Wigner readout after every kick, and the classical stroboscopic
// map used for phase portraits.
//
// One period is U = U_NL U_kick with
//     U_kick = exp(-i (pi/2) J_x),   U_NL = exp(-i k J_z^2 / 2j).
// For two qubits J_z^2 = I/2 + 2 I_z1 I_z2; the identity only contributes a
// global phase, so the twist is generated by the bilinear term alone.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "swpst/errors.hpp"
#include "swpst/phase_space.hpp"
#include "swpst/qmat.hpp"
#include "swpst/states.hpp"
#include "swpst/tomography.hpp"

namespace swpst {

namespace chaoticity {
inline constexpr double regular = 0.5;
inline constexpr double mixed = 2.5;
inline constexpr double chaotic = 2.0 * std::numbers::pi + 2.5;
}  // namespace chaoticity

struct SphericalPoint {
    double theta = 0.0;
    double phi = 0.0;
};

namespace initial_point {
inline constexpr SphericalPoint regular{std::numbers::pi / 2.0, std::numbers::pi};  // R
inline constexpr SphericalPoint chaotic{1.0, 2.5};                                 // C
}  // namespace initial_point

struct AngularMomentum {
    ComplexMatrix x, y, z;
};

/// J = I_1 + I_2 with I = sigma/2; |0> is spin up.
inline AngularMomentum two_qubit_angular_momentum() {
    ComplexMatrix sx(2, 2), sy(2, 2), sz(2, 2);
    sx << 0.0, 0.5, 0.5, 0.0;
    sy << 0.0, Complex(0.0, -0.5), Complex(0.0, 0.5), 0.0;
    sz << 0.5, 0.0, 0.0, -0.5;
    const ComplexMatrix id = identity(2);
    return {tensor(sx, id) + tensor(id, sx), tensor(sy, id) + tensor(id, sy), tensor(sz, id) + tensor(id, sz)};
}

enum class TwistGenerator {
    bilinear,  // 2 I_z1 I_z2
    full,      // J_z^2
};

struct QKTUnitaries {
    ComplexMatrix kick;
    ComplexMatrix twist;
};

inline QKTUnitaries qkt_unitaries(double k, TwistGenerator generator = TwistGenerator::bilinear) {
    if (!std::isfinite(k)) throw InvalidArgument("chaoticity parameter must be finite");
    const auto j = two_qubit_angular_momentum();
    constexpr double spin = 1.0;
    ComplexMatrix twist_generator;
    if (generator == TwistGenerator::full) {
        twist_generator = j.z * j.z;
    } else {
        ComplexMatrix sz(2, 2);
        sz << 0.5, 0.0, 0.0, -0.5;
        twist_generator = 2.0 * tensor(sz, sz);
    }
    return {expm_hermitian_generator(j.x, std::numbers::pi / 2.0),
            expm_hermitian_generator(twist_generator, k / (2.0 * spin))};
}

enum class PeriodOrder {
    kick_then_twist,  // U_NL U_kick
    twist_then_kick,  // U_kick U_NL; only for regression checks
};

struct QKTParams {
    double k = chaoticity::regular;
    int kicks = 0;
    double theta0 = initial_point::regular.theta;
    double phi0 = initial_point::regular.phi;
    CellSelection selection = CellSelection::row(0, 4);
    ReadoutMethod method = ReadoutMethod::direct;
    std::uint64_t shots = 0;  // used by circuit_sampled
    std::uint64_t seed = 0;   // used by circuit_sampled
    bool keep_states = false;
    TwistGenerator twist = TwistGenerator::bilinear;
    PeriodOrder order = PeriodOrder::kick_then_twist;
};

struct KickRecord {
    int t = 0;
    TomographyResult readout;
    double signature = 0.0;  // S: sum of the selected cells
    std::optional<DensityMatrix> state;
};

struct KickedTopRun {
    QKTParams params;
    std::vector<KickRecord> records;  // kicks + 1 entries, t = 0 is the initial state

    [[nodiscard]] std::vector<double> signatures() const {
        std::vector<double> s;
        s.reserve(records.size());
        for (const auto& r : records) s.push_back(r.signature);
        return s;
    }
};

inline constexpr double purity_tolerance = 1e-9;

inline KickedTopRun run_qkt(const QKTParams& params) {
    if (params.kicks < 0) throw InvalidArgument("kick count must be non-negative");
    if (params.selection.dim() != 4) throw DimensionMismatch("kicked top readout needs a selection over N = 4");
    if (params.method == ReadoutMethod::circuit_sampled && params.shots == 0) {
        throw InvalidArgument("sampled readout needs shots > 0");
    }

    const auto u = qkt_unitaries(params.k, params.twist);
    const ComplexMatrix period =
        params.order == PeriodOrder::kick_then_twist ? ComplexMatrix(u.twist * u.kick) : ComplexMatrix(u.kick * u.twist);
    const PhaseSpaceFrame frame(4);

    KickedTopRun run{params, {}};
    run.records.reserve(static_cast<std::size_t>(params.kicks) + 1);
    DensityMatrix rho = two_qubit_scs(params.theta0, params.phi0);
    for (int t = 0; t <= params.kicks; ++t) {
        if (t > 0) rho = rho.evolved(period);
        const double purity = rho.purity();
        if (std::abs(purity - 1.0) > purity_tolerance) {
            throw Error("purity drifted to " + std::to_string(purity) + " at kick " + std::to_string(t));
        }
        TomographyResult readout = [&] {
            switch (params.method) {
                case ReadoutMethod::circuit_exact: return circuit_read(frame, rho, params.selection, 0);
                case ReadoutMethod::circuit_sampled:
                    return circuit_read(frame, rho, params.selection, params.shots,
                                        params.seed + static_cast<std::uint64_t>(t));
                case ReadoutMethod::direct: break;
            }
            return direct_read(frame, rho, params.selection);
        }();
        const double s = readout.sum();
        run.records.push_back({t, std::move(readout), s, params.keep_states ? std::optional(rho) : std::nullopt});
    }
    return run;
}

/// Sample variance (n - 1 denominator); zero for fewer than two values.
inline double sample_variance(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(xs.size() - 1);
}

// --- classical limit -------------------------------------------------------

struct ClassicalTopState {
    double x = 0.0;
    double y = 0.0;
    double z = 1.0;

    static ClassicalTopState from_angles(double theta, double phi) {
        return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
    }

    [[nodiscard]] double norm() const { return std::sqrt(x * x + y * y + z * z); }

    /// theta = arccos(Z), phi = atan2(Y, X) folded to [0, 2 pi).
    [[nodiscard]] SphericalPoint angles() const {
        const double theta = std::acos(std::clamp(z, -1.0, 1.0));
        double phi = std::atan2(y, x);
        if (phi < 0.0) phi += 2.0 * std::numbers::pi;
        if (phi >= 2.0 * std::numbers::pi) phi = 0.0;
        return {theta, phi};
    }
};

/// <J>/j for a two-qubit state.
inline ClassicalTopState spin_expectation(const DensityMatrix& rho) {
    const auto j = two_qubit_angular_momentum();
    return {trace_of_product(j.x, rho.matrix()).real(), trace_of_product(j.y, rho.matrix()).real(),
            trace_of_product(j.z, rho.matrix()).real()};
}

/// One period: pi/2 rotation about x, then rotation about z by k Z.
inline ClassicalTopState classical_step(const ClassicalTopState& s, double k) {
    const double x1 = s.x;
    const double y1 = -s.z;
    const double z1 = s.y;
    const double angle = k * z1;
    const double c = std::cos(angle);
    const double sn = std::sin(angle);
    ClassicalTopState out{x1 * c - y1 * sn, x1 * sn + y1 * c, z1};
    const double n = out.norm();
    out.x /= n;
    out.y /= n;
    out.z /= n;
    return out;
}

/// Stroboscopic samples after each of `steps` periods, one trajectory per seed.
inline std::vector<std::vector<SphericalPoint>> phase_portrait(double k, const std::vector<SphericalPoint>& seeds,
                                                               int steps) {
    if (steps < 1) throw InvalidArgument("phase portrait needs at least one step");
    std::vector<std::vector<SphericalPoint>> out;
    out.reserve(seeds.size());
    for (const auto& seed : seeds) {
        auto s = ClassicalTopState::from_angles(seed.theta, seed.phi);
        std::vector<SphericalPoint> traj;
        traj.reserve(static_cast<std::size_t>(steps));
        for (int i = 0; i < steps; ++i) {
            s = classical_step(s, k);
            traj.push_back(s.angles());
        }
        out.push_back(std::move(traj));
    }
    return out;
}

/// Evenly spaced seeds: theta at cell midpoints of [0, pi], phi on [0, 2 pi).
inline std::vector<SphericalPoint> seed_grid(int n_theta, int n_phi) {
    if (n_theta < 1 || n_phi < 1) throw InvalidArgument("seed grid needs positive extents");
    std::vector<SphericalPoint> seeds;
    seeds.reserve(static_cast<std::size_t>(n_theta) * n_phi);
    for (int i = 0; i < n_theta; ++i)
        for (int j = 0; j < n_phi; ++j)
            seeds.push_back({(i + 0.5) * std::numbers::pi / n_theta, 2.0 * std::numbers::pi * j / n_phi});
    return seeds;
}

/// Fraction of a bins x bins (theta, phi) histogram visited by a trajectory.
inline double histogram_occupancy(const std::vector<SphericalPoint>& trajectory, int bins = 50) {
    if (bins < 1) throw InvalidArgument("histogram needs at least one bin");
    std::vector<bool> hit(static_cast<std::size_t>(bins) * bins, false);
    const auto bin = [bins](double v, double range) {
        return std::clamp(static_cast<int>(v / range * bins), 0, bins - 1);
    };
    for (const auto& pt : trajectory) {
        hit[static_cast<std::size_t>(bin(pt.theta, std::numbers::pi)) * bins + bin(pt.phi, 2.0 * std::numbers::pi)] =
            true;
    }
    std::size_t count = 0;
    for (bool h : hit) count += h ? 1 : 0;
    return static_cast<double>(count) / static_cast<double>(hit.size());
}

}  // namespace swpst

#pragma once

// Sparsity and pruning statistics for randomized harmonic states.

#include <cmath>
#include <cstdint>
#include <vector>

#include "swpst/errors.hpp"
#include "swpst/phase_space.hpp"
#include "swpst/states.hpp"
#include "swpst/tomography.hpp"

namespace swpst {

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation
};

inline MeanStd mean_std(const std::vector<double>& xs) {
    MeanStd out;
    if (xs.empty()) return out;
    for (double x : xs) out.mean += x;
    out.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - out.mean) * (x - out.mean);
        out.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    return out;
}

struct SparsityRow {
    double eta = 0.0;
    double threshold = 0.0;
    MeanStd rho_sparsity;
    MeanStd w_sparsity;
    MeanStd pruning_infidelity;  // 1 - F(W, prune(W))
};

struct SparsityStudy {
    int j = 0;
    int dim = 8;
    std::vector<double> etas{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    std::vector<double> thresholds{0.10, 0.01};
    int seeds = 200;
    std::uint64_t base_seed = 0;
};

/// One row per (eta, threshold). Seed s of every eta uses base_seed + s, so the
/// rows of a study share their random draws.
inline std::vector<SparsityRow> run_sparsity_study(const SparsityStudy& study) {
    if (study.seeds < 1) throw InvalidArgument("sparsity study needs at least one seed");
    for (double t : study.thresholds)
        if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("threshold outside [0, 1]");
    const PhaseSpaceFrame frame(study.dim);
    std::vector<SparsityRow> rows;
    for (double eta : study.etas) {
        std::vector<std::vector<double>> rho_sp(study.thresholds.size()), w_sp(study.thresholds.size()),
            infid(study.thresholds.size());
        for (int s = 0; s < study.seeds; ++s) {
            const auto psi = randomized_harmonic({study.j, eta, study.base_seed + static_cast<std::uint64_t>(s)},
                                                 study.dim);
            const DensityMatrix rho = psi.density();
            const WignerMatrix w = wigner_transform(frame, rho);
            for (std::size_t i = 0; i < study.thresholds.size(); ++i) {
                const double t = study.thresholds[i];
                rho_sp[i].push_back(sparsity(rho.matrix(), t));
                w_sp[i].push_back(sparsity(w, t));
                infid[i].push_back(1.0 - wigner_fidelity(w, prune(w, t)));
            }
        }
        for (std::size_t i = 0; i < study.thresholds.size(); ++i) {
            rows.push_back({eta, study.thresholds[i], mean_std(rho_sp[i]), mean_std(w_sp[i]), mean_std(infid[i])});
        }
    }
    return rows;
}

}  // namespace swpst

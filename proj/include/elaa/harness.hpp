#pragma once

// Seeded Monte Carlo experiments:
//  - SER of each detector at every iteration, with and without UW-SVD,
//    against the zero-forcing baseline;
//  - condition numbers of Psi^H Psi and H^H H.
// Every random draw of trial t derives from trial_seed(master_seed, t), so the
// output does not depend on how trials are spread over threads.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "elaa/channel.hpp"
#include "elaa/detectors.hpp"
#include "elaa/scenario.hpp"

namespace elaa {

struct SerCurve {
    Method method = Method::SSOR;
    bool uwsvd = false;
    std::vector<double> ser;  // ser[t - 1] is the SER after iteration t
    int trials = 0;
    double zf_ser = 0.0;
    /// SER of the exact solve through the UW-SVD equivalent model on the same draws.
    double zf_uwsvd_ser = 0.0;
    int diverged_trials = 0;
    std::uint64_t seed = 0;
};

struct CondSample {
    ChannelKind channel = ChannelKind::Elaa;
    int trial = 0;
    double cond_a = 0.0;      // cond(Psi^H Psi)
    double cond_a_bar = 0.0;  // cond(H^H H)
};

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial);

ChannelRealization draw_channel(const ScenarioConfig& config, std::uint64_t seed);

/// Curves in the order of config.detectors. Iterations after a divergence
/// count every symbol of that trial as an error.
std::vector<SerCurve> run_experiment1(const ScenarioConfig& config);

/// One sample per trial, in trial order.
std::vector<CondSample> run_experiment2(const ScenarioConfig& config);

/// First iteration (1-based) whose SER is within rel_tol of the ZF SER.
std::optional<int> iterations_to_reach(const SerCurve& curve, double rel_tol = 0.1);

struct FactorCheck {
    double relative_error = 0.0;  // ||s_uwsvd - s_zf|| / ||s_zf||
    double max_diag_defect = 0.0; // max |diag(Psi^H Psi) - 1|
};

/// Theorem-1 style check on one fresh draw: ZF through the UW-SVD model vs direct ZF.
FactorCheck factor_check(const ScenarioConfig& config);

}  // namespace elaa

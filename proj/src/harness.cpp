#include "elaa/harness.hpp"

#include <atomic>
#include <exception>
#include <thread>

#include "elaa/modem.hpp"
#include "elaa/rng.hpp"
#include "elaa/uwsvd.hpp"

namespace elaa {

namespace {

enum TrialStream : std::uint64_t { kChannel = 11, kSymbols = 12, kNoise = 13 };

// Runs fn(0..trials-1) on `threads` workers; results are indexed by trial and
// the first failing trial (by index) is rethrown.
template <typename Result, typename Fn>
std::vector<Result> run_trials(int trials, int threads, Fn&& fn) {
    std::vector<Result> results(static_cast<std::size_t>(trials));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(trials));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int t = next++; t < trials; t = next++) {
            try {
                results[static_cast<std::size_t>(t)] = fn(t);
            } catch (...) {
                errors[static_cast<std::size_t>(t)] = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (int i = 1; i < std::min(threads, trials); ++i) pool.emplace_back(worker);
        worker();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

struct Exp1Trial {
    std::vector<std::vector<std::int64_t>> errors;  // [detector][iteration]
    std::vector<bool> diverged;
    std::int64_t zf_errors = 0;
    std::int64_t zf_uwsvd_errors = 0;
    std::int64_t symbols = 0;
};

struct Draw {
    ChannelRealization channel;
    ComplexVector s;
    ComplexVector y;
};

Draw draw_trial(const ScenarioConfig& config, const QamConstellation& qam, std::uint64_t seed) {
    Draw d;
    d.channel = draw_channel(config, derive_seed(seed, kChannel));
    d.s = draw_symbols(d.channel.h.cols(), qam, derive_seed(seed, kSymbols));
    const auto noise = calibrate_noise(d.channel.h, config.effective_esno_db());
    d.y = add_awgn(ComplexVector(d.channel.h * d.s), noise, derive_seed(seed, kNoise));
    return d;
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial) { return derive_seed(master_seed, trial); }

ChannelRealization draw_channel(const ScenarioConfig& config, std::uint64_t seed) {
    const auto& g = config.geometry;
    if (config.channel == ChannelKind::Elaa) return gen_elaa(g, config.fading, seed);
    return gen_iid_rayleigh(g.m, UserPartition::uniform(g.k_users, g.n_per_user), seed);
}

std::vector<SerCurve> run_experiment1(const ScenarioConfig& config) {
    config.validate();
    const auto qam = QamConstellation::square(config.modulation);
    const auto& dets = config.detectors;

    auto trial_fn = [&](int trial) {
        const auto draw = draw_trial(config, qam, trial_seed(config.master_seed, static_cast<std::uint64_t>(trial)));
        const auto& h = draw.channel.h;
        const auto n = h.cols();

        Exp1Trial out;
        out.symbols = n;
        out.zf_errors = hard_decide_and_count(pseudo_inverse_solve(h, draw.y), draw.s, qam).errors;

        const auto factors = preprocess(h, draw.channel.partition, draw.y);
        out.zf_uwsvd_errors =
            hard_decide_and_count(postprocess(factors, ComplexVector(pseudo_inverse_solve(factors.psi, draw.y))), draw.s, qam)
                .errors;

        std::optional<SplitSystem<double>> plain;
        std::optional<SplitSystem<double>> uw;
        for (const auto& d : dets) {
            if (d.uwsvd && !uw) uw.emplace(uwsvd_system(factors, draw.y));
            if (!d.uwsvd && !plain) plain.emplace(ComplexMatrix(h.adjoint() * h), ComplexVector(h.adjoint() * draw.y));
        }

        for (const auto& d : dets) {
            DetectorSpec spec;
            spec.method = d.method;
            spec.max_iters = d.max_iters;
            spec.x0 = config.x0;
            spec.theta_is_identity = d.uwsvd;
            const auto traj = run_detector(spec, d.uwsvd ? *uw : *plain);
            std::vector<std::int64_t> errs(static_cast<std::size_t>(d.max_iters), n);
            for (std::size_t t = 0; t < traj.iterates.size(); ++t) {
                const ComplexVector est = d.uwsvd ? postprocess(factors, traj.iterates[t]) : traj.iterates[t];
                errs[t] = hard_decide_and_count(est, draw.s, qam).errors;
            }
            out.errors.push_back(std::move(errs));
            out.diverged.push_back(traj.diverged);
        }
        return out;
    };

    const auto trials = run_trials<Exp1Trial>(config.trials, config.threads, trial_fn);

    std::vector<SerCurve> curves(dets.size());
    std::int64_t total = 0, zf = 0, zf_uw = 0;
    std::vector<std::vector<std::int64_t>> sums(dets.size());
    for (std::size_t i = 0; i < dets.size(); ++i) sums[i].assign(static_cast<std::size_t>(dets[i].max_iters), 0);
    for (const auto& tr : trials) {
        total += tr.symbols;
        zf += tr.zf_errors;
        zf_uw += tr.zf_uwsvd_errors;
        for (std::size_t i = 0; i < dets.size(); ++i) {
            for (std::size_t t = 0; t < sums[i].size(); ++t) sums[i][t] += tr.errors[i][t];
            if (tr.diverged[i]) ++curves[i].diverged_trials;
        }
    }
    const double denom = static_cast<double>(total);
    for (std::size_t i = 0; i < dets.size(); ++i) {
        auto& c = curves[i];
        c.method = dets[i].method;
        c.uwsvd = dets[i].uwsvd;
        c.trials = config.trials;
        c.seed = config.master_seed;
        c.zf_ser = static_cast<double>(zf) / denom;
        c.zf_uwsvd_ser = static_cast<double>(zf_uw) / denom;
        c.ser.reserve(sums[i].size());
        for (auto e : sums[i]) c.ser.push_back(static_cast<double>(e) / denom);
    }
    return curves;
}

std::vector<CondSample> run_experiment2(const ScenarioConfig& config) {
    config.validate();
    auto trial_fn = [&](int trial) {
        const auto seed = trial_seed(config.master_seed, static_cast<std::uint64_t>(trial));
        const auto ch = draw_channel(config, derive_seed(seed, kChannel));
        const auto rep = conditioning_report(ch.h, ch.partition);
        return CondSample{config.channel, trial, rep.cond_a, rep.cond_a_bar};
    };
    return run_trials<CondSample>(config.trials, config.threads, trial_fn);
}

std::optional<int> iterations_to_reach(const SerCurve& curve, double rel_tol) {
    const double target = (1.0 + rel_tol) * curve.zf_ser;
    for (std::size_t t = 0; t < curve.ser.size(); ++t)
        if (curve.ser[t] <= target) return static_cast<int>(t) + 1;
    return std::nullopt;
}

FactorCheck factor_check(const ScenarioConfig& config) {
    config.validate();
    const auto qam = QamConstellation::square(config.modulation);
    const auto draw = draw_trial(config, qam, trial_seed(config.master_seed, 0));
    const ComplexVector direct = pseudo_inverse_solve(draw.channel.h, draw.y);
    const ComplexVector via = zf_via_uwsvd(draw.channel.h, draw.channel.partition, draw.y);
    const auto f = preprocess(draw.channel.h, draw.channel.partition);
    FactorCheck out;
    out.relative_error = (via - direct).norm() / direct.norm();
    out.max_diag_defect = (f.a.diagonal().array() - 1.0).abs().maxCoeff();
    return out;
}

}  // namespace elaa

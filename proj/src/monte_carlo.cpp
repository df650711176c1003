#include "gridstore/monte_carlo.hpp"

#include "gridstore/random.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gridstore {

namespace {

constexpr std::uint64_t kBlockSize = std::uint64_t{1} << 16;
constexpr std::uint64_t kEnsembleChunk = 1024;
const std::vector<double> kQuantileLevels{0.05, 0.25, 0.5, 0.75, 0.95};

struct StepSums {
    double g = 0.0;
    double d = 0.0;
    double s = 0.0;
    double spill = 0.0;
    double deficit = 0.0;
    std::uint64_t spills = 0;
    std::uint64_t deficits = 0;
};

// Linear interpolation between order statistics of a sorted sample.
double sorted_quantile(std::span<const double> sorted, double p) {
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

} // namespace

ProbabilityEstimate ProbabilityEstimate::from_counts(std::uint64_t hits, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("probability estimate needs n >= 1");
    if (hits > n) throw std::invalid_argument("probability estimate: hits exceed n");
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    return ProbabilityEstimate{
        .p_hat = p,
        .ci_halfwidth = 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n)),
        .n = n,
        .hits = hits,
    };
}

double ProbabilityEstimate::gate_tolerance() const {
    return std::max(ci_halfwidth, 3.0 / static_cast<double>(n));
}

bool ProbabilityEstimate::agrees_with(double analytic) const {
    return std::abs(analytic - p_hat) <= gate_tolerance();
}

BalanceSample::BalanceSample(const Distribution& gen, const Distribution& dem, std::uint64_t n,
                             std::uint64_t seed)
    : draws_(n) {
    if (n == 0) throw std::invalid_argument("balance sample needs n >= 1");
    const std::uint64_t blocks = (n + kBlockSize - 1) / kBlockSize;
    parallel_for(blocks, [&](std::size_t block) {
        RandomStream stream(seed, block);
        const std::uint64_t begin = block * kBlockSize;
        const std::uint64_t end = std::min(n, begin + kBlockSize);
        for (std::uint64_t i = begin; i < end; ++i) {
            const double g = sample(gen, stream);
            const double d = sample(dem, stream);
            draws_[i] = g - d;
        }
    });
    std::sort(draws_.begin(), draws_.end());
}

OutcomeEstimate BalanceSample::classify(const BalanceQuery& query) const {
    query.validate();
    const auto n = static_cast<std::uint64_t>(draws_.size());
    const auto at_or_below = [&](double x) {
        return static_cast<std::uint64_t>(std::upper_bound(draws_.begin(), draws_.end(), x) -
                                          draws_.begin());
    };
    const std::uint64_t deficit = at_or_below(query.deficit_threshold());
    const std::uint64_t within_max = at_or_below(query.overflow_threshold());
    return OutcomeEstimate{
        .deficit = ProbabilityEstimate::from_counts(deficit, n),
        .overflow = ProbabilityEstimate::from_counts(n - within_max, n),
        .self = ProbabilityEstimate::from_counts(within_max - deficit, n),
    };
}

OutcomeEstimate estimate_self_sufficiency(const Distribution& gen, const Distribution& dem,
                                          const StorageSpec& storage, double s_prev,
                                          std::uint64_t n, std::uint64_t seed) {
    if (n < kMinGateSamples) {
        throw std::invalid_argument("estimate_self_sufficiency: n must be >= 1000");
    }
    const BalanceQuery query{s_prev, storage};
    query.validate();
    return BalanceSample(gen, dem, n, seed).classify(query);
}

bool SweepRow::agrees() const {
    return mc.deficit.agrees_with(analytic.p_deficit) &&
           mc.overflow.agrees_with(analytic.p_overflow) && mc.self.agrees_with(analytic.p_self);
}

std::vector<SweepRow> sweep_battery_levels(double gen_value, const Weibull& dem,
                                           const StorageSpec& storage,
                                           std::span<const double> levels, std::uint64_t n,
                                           std::uint64_t seed) {
    storage.validate();
    for (double level : levels) {
        if (!storage.contains(level)) {
            throw std::invalid_argument("sweep_battery_levels: level outside storage window");
        }
    }
    if (n < kMinGateSamples) {
        throw std::invalid_argument("sweep_battery_levels: n must be >= 1000");
    }

    const BalanceSample draws(Distribution::deterministic(gen_value), Distribution(dem), n, seed);
    std::vector<SweepRow> rows;
    rows.reserve(levels.size());
    for (double level : levels) {
        rows.push_back(SweepRow{
            .level = level,
            .analytic = weibull_closed_form(gen_value, level, storage, dem),
            .mc = draws.classify(BalanceQuery{level, storage}),
        });
    }
    return rows;
}

Trajectory simulate_trajectory(const Scenario& scenario, std::uint64_t seed, std::uint64_t index) {
    RandomStream stream(seed, index);
    std::vector<double> g(scenario.horizon());
    std::vector<double> d(scenario.horizon());
    for (std::size_t t = 0; t < scenario.horizon(); ++t) {
        g[t] = sample(scenario.steps[t].generation, stream);
        d[t] = sample(scenario.steps[t].demand, stream);
    }
    return evolve(scenario.storage, g, d);
}

EnsembleStats simulate_ensemble(const Scenario& scenario, std::uint64_t n, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("simulate_ensemble: n must be >= 1");
    validate_scenario(scenario);

    const std::size_t horizon = scenario.horizon();
    const std::uint64_t chunks = (n + kEnsembleChunk - 1) / kEnsembleChunk;

    // Levels are kept for quantiles (column per trajectory, so workers write
    // disjoint entries); everything else is summed per chunk and the chunks
    // are combined in index order.
    std::vector<double> levels(horizon * n);
    std::vector<std::vector<StepSums>> partial(chunks, std::vector<StepSums>(horizon));
    parallel_for(chunks, [&](std::size_t c) {
        const std::uint64_t begin = c * kEnsembleChunk;
        const std::uint64_t end = std::min(n, begin + kEnsembleChunk);
        for (std::uint64_t k = begin; k < end; ++k) {
            const Trajectory traj = simulate_trajectory(scenario, seed, k);
            for (std::size_t t = 0; t < horizon; ++t) {
                StepSums& acc = partial[c][t];
                acc.g += traj.g[t];
                acc.d += traj.d[t];
                acc.s += traj.s[t];
                acc.spill += traj.spill[t];
                acc.deficit += traj.deficit[t];
                acc.spills += traj.spill[t] > 0.0;
                acc.deficits += traj.deficit[t] > 0.0;
                levels[t * n + k] = traj.s[t];
            }
        }
    });

    EnsembleStats stats{.quantile_levels = kQuantileLevels, .steps = {}, .n_trajectories = n,
                        .seed = seed};
    stats.steps.reserve(horizon);
    const double count = static_cast<double>(n);
    for (std::size_t t = 0; t < horizon; ++t) {
        StepSums total;
        for (const auto& chunk : partial) {
            total.g += chunk[t].g;
            total.d += chunk[t].d;
            total.s += chunk[t].s;
            total.spill += chunk[t].spill;
            total.deficit += chunk[t].deficit;
            total.spills += chunk[t].spills;
            total.deficits += chunk[t].deficits;
        }

        StepStats step;
        step.mean_g = total.g / count;
        step.mean_d = total.d / count;
        step.mean_b = step.mean_g - step.mean_d;
        step.mean_s = total.s / count;
        step.mean_spill = total.spill / count;
        step.mean_deficit = total.deficit / count;
        step.spill_frequency = static_cast<double>(total.spills) / count;
        step.deficit_frequency = static_cast<double>(total.deficits) / count;

        std::span<double> row(levels.data() + t * n, n);
        std::sort(row.begin(), row.end());
        for (double q : kQuantileLevels) step.s_quantiles.push_back(sorted_quantile(row, q));
        stats.steps.push_back(std::move(step));
    }
    return stats;
}

} // namespace gridstore

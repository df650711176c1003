#pragma once

#include "gridstore/balance.hpp"
#include "gridstore/distribution.hpp"
#include "gridstore/scenario.hpp"
#include "gridstore/storage.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace gridstore {

/// Fewest draws for which the normal-approximation interval is used as a gate.
inline constexpr std::uint64_t kMinGateSamples = 1000;

/// Event frequency with a 3-standard-error normal-approximation interval.
struct ProbabilityEstimate {
    double p_hat = 0.0;
    double ci_halfwidth = 0.0;
    std::uint64_t n = 0;
    std::uint64_t hits = 0;

    static ProbabilityEstimate from_counts(std::uint64_t hits, std::uint64_t n);

    /// Half-width used when comparing against an analytic value. The normal
    /// interval collapses when no (or every) draw hits, so it is floored at
    /// 3/n, the rule-of-three bound.
    double gate_tolerance() const;
    bool agrees_with(double analytic) const;
};

struct OutcomeEstimate {
    ProbabilityEstimate deficit;
    ProbabilityEstimate overflow;
    ProbabilityEstimate self;
};

/// Sorted draws of B = G - D, reusable across storage levels.
class BalanceSample {
public:
    /// Draws n balances in fixed-size blocks; block i uses stream (seed, i).
    BalanceSample(const Distribution& gen, const Distribution& dem, std::uint64_t n,
                  std::uint64_t seed);

    /// Counts B <= S_min - s_prev as deficit and B > S_max - s_prev as overflow.
    OutcomeEstimate classify(const BalanceQuery& query) const;

    std::span<const double> draws() const { return draws_; }
    std::uint64_t size() const { return draws_.size(); }

private:
    std::vector<double> draws_;
};

/// Frequency estimate of the deficit / overflow / self-sufficient triple.
/// Requires n >= kMinGateSamples; counts always sum to n.
OutcomeEstimate estimate_self_sufficiency(const Distribution& gen, const Distribution& dem,
                                          const StorageSpec& storage, double s_prev,
                                          std::uint64_t n, std::uint64_t seed);

struct SweepRow {
    double level;
    OutcomeProbabilities analytic;
    OutcomeEstimate mc;

    bool agrees() const;
};

/// Closed form next to a Monte Carlo estimate at each battery level. Every
/// level reuses the same draws, so one row equals estimate_self_sufficiency
/// at that level and seed.
std::vector<SweepRow> sweep_battery_levels(double gen_value, const Weibull& dem,
                                           const StorageSpec& storage,
                                           std::span<const double> levels, std::uint64_t n,
                                           std::uint64_t seed);

struct StepStats {
    double mean_g = 0.0;
    double mean_d = 0.0;
    double mean_b = 0.0;
    double mean_s = 0.0;
    std::vector<double> s_quantiles; // one per EnsembleStats::quantile_levels
    double spill_frequency = 0.0;
    double deficit_frequency = 0.0;
    double mean_spill = 0.0;
    double mean_deficit = 0.0;
};

struct EnsembleStats {
    std::vector<double> quantile_levels;
    std::vector<StepStats> steps;
    std::uint64_t n_trajectories = 0;
    std::uint64_t seed = 0;
};

/// Realization `index` of `scenario`, drawn from stream (seed, index).
Trajectory simulate_trajectory(const Scenario& scenario, std::uint64_t seed, std::uint64_t index);

/// n independent trajectories 0..n-1. Output depends only on the arguments,
/// not on thread scheduling.
EnsembleStats simulate_ensemble(const Scenario& scenario, std::uint64_t n, std::uint64_t seed);

} // namespace gridstore

#pragma once

#include "gridstore/distribution.hpp"
#include "gridstore/storage.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace gridstore {

inline constexpr std::size_t kDefaultGridCells = 4096;
inline constexpr double kDefaultCoverage = 1.0 - 1e-8;
/// Largest probability mass a grid may lose to tail truncation before
/// results are considered unreliable.
inline constexpr double kMassBudget = 1e-6;

/// Raised when two grids cannot be brought onto a common step.
class GridError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Probability masses on a uniform grid. Cell i holds its mass spread
/// uniformly over [origin + i*step, origin + (i+1)*step).
///
/// A grid with exactly one cell is a point mass located at `origin`; its
/// step carries no meaning. Deterministic quantities and their exact
/// shifts are represented this way.
struct DensityGrid {
    double origin = 0.0;
    double step = 1.0;
    std::vector<double> masses;

    bool is_atom() const { return masses.size() == 1; }
    double span() const;
    double total_mass() const;
    double truncated_mass() const { return 1.0 - total_mass(); }
    /// Mean of the grid's law, normalized by total mass.
    double mean() const;
    /// Pr[X <= x] under the piecewise-uniform law.
    double cumulative(double x) const;

    /// Throws std::invalid_argument on negative masses, step <= 0, an empty
    /// grid, or total mass above one.
    void validate() const;
};

/// Discretizes `dist` onto `cells` cells covering its central `coverage`
/// probability. Mass outside the window is dropped, not renormalized.
/// Deterministic maps to a point mass; empirical samples map to a
/// histogram whose cell centers span [min, max].
DensityGrid discretize(const Distribution& dist, std::size_t cells = kDefaultGridCells,
                       double coverage = kDefaultCoverage);

/// Re-bins `grid` onto spacing `new_step`, keeping its origin. Throws
/// GridError if the result would exceed 2^20 cells.
DensityGrid resample(const DensityGrid& grid, double new_step);

/// Law of G - D for independent G ~ gen and D ~ dem.
DensityGrid difference_density(const DensityGrid& gen, const DensityGrid& dem);

/// Pr[lo < X <= hi]; infinities are accepted as open ends.
/// Throws std::invalid_argument if lo > hi.
double interval_probability(const DensityGrid& grid, double lo, double hi);

struct BalanceQuery {
    double s_prev;
    StorageSpec storage;

    void validate() const;
    double deficit_threshold() const { return storage.s_min - s_prev; }
    double overflow_threshold() const { return storage.s_max - s_prev; }
};

/// Deficit (event A), overflow (event B) and self-sufficiency probabilities
/// for one step. `truncated_mass` is the probability the analytic route
/// could not place; the three probabilities sum to 1 - truncated_mass.
struct OutcomeProbabilities {
    double p_deficit = 0.0;
    double p_overflow = 0.0;
    double p_self = 0.0;
    double truncated_mass = 0.0;

    double p_not_self() const { return 1.0 - p_self; }
};

/// p_deficit = Pr[B <= S_min - s_prev], p_overflow = Pr[B > S_max - s_prev].
OutcomeProbabilities self_sufficiency(const DensityGrid& balance, const BalanceQuery& query);

/// Closed form for known next-step generation `g_next` and Weibull demand.
/// Event A: D > g_next + s_prev - S_min. Event B: D < g_next + s_prev - S_max.
/// Throws std::invalid_argument for s_prev outside the window or g_next < 0.
OutcomeProbabilities weibull_closed_form(double g_next, double s_prev, const StorageSpec& storage,
                                         const Weibull& demand);

} // namespace gridstore

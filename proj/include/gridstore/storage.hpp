#pragma once

#include <span>
#include <vector>

namespace gridstore {

/// Storage window [s_min, s_max] and the level at t = 0.
struct StorageSpec {
    double s_min;
    double s_max;
    double s_init;

    /// Throws std::invalid_argument naming the broken rule.
    void validate() const;
    bool contains(double level) const { return level >= s_min && level <= s_max; }

    friend bool operator==(const StorageSpec&, const StorageSpec&) = default;
};

struct StepResult {
    double s_next;
    double spill;   // surplus that could not be stored
    double deficit; // demand that storage could not cover
};

/// One application of the clamped recursion
/// s_next = clamp(s_prev + b, s_min, s_max).
/// Throws std::invalid_argument if s_prev is outside the window or b is not finite.
StepResult step(double s_prev, double b, const StorageSpec& spec);

/// Realized per-step series, t = 1..T. `g` and `d` are empty when the
/// trajectory was evolved from balances alone.
struct Trajectory {
    double s_init = 0.0;
    std::vector<double> g;
    std::vector<double> d;
    std::vector<double> b;
    std::vector<double> s;
    std::vector<double> spill;
    std::vector<double> deficit;

    std::size_t size() const { return b.size(); }
    double final_level() const { return s.empty() ? s_init : s.back(); }
};

Trajectory evolve(const StorageSpec& spec, std::span<const double> balances);

/// Same as above with b(t) = g(t) - d(t); g and d are kept on the trajectory.
Trajectory evolve(const StorageSpec& spec, std::span<const double> generation,
                  std::span<const double> demand);

} // namespace gridstore

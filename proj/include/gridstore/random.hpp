#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace gridstore {

/// Independent random stream identified by (seed, index).
///
/// The engine state is a pure function of the pair, so work split into
/// indexed units (trajectories, sample blocks) draws the same numbers no
/// matter how the units are scheduled across threads.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t index);

    /// Uniform draw on the open interval (0, 1).
    double uniform();

    /// Standard normal draw.
    double normal();

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Runs body(i) for i in [0, count) on up to hardware_concurrency threads.
/// Units must write disjoint outputs; callers reduce in index order.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace gridstore

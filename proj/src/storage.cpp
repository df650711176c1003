#include "gridstore/storage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gridstore {

void StorageSpec::validate() const {
    if (!std::isfinite(s_min) || !std::isfinite(s_max) || !std::isfinite(s_init)) {
        throw std::invalid_argument("storage levels must be finite");
    }
    if (s_min < 0.0) throw std::invalid_argument("S_min >= 0 violated");
    if (!(s_max > s_min)) throw std::invalid_argument("S_max > S_min violated");
    if (!contains(s_init)) throw std::invalid_argument("S_min <= s_init <= S_max violated");
}

StepResult step(double s_prev, double b, const StorageSpec& spec) {
    if (!spec.contains(s_prev)) throw std::invalid_argument("step: s_prev outside storage window");
    if (!std::isfinite(b)) throw std::invalid_argument("step: balance is not finite");

    const double unclamped = s_prev + b;
    return StepResult{
        .s_next = std::clamp(unclamped, spec.s_min, spec.s_max),
        .spill = std::max(0.0, unclamped - spec.s_max),
        .deficit = std::max(0.0, spec.s_min - unclamped),
    };
}

Trajectory evolve(const StorageSpec& spec, std::span<const double> balances) {
    spec.validate();
    Trajectory traj;
    traj.s_init = spec.s_init;
    traj.b.assign(balances.begin(), balances.end());
    traj.s.reserve(balances.size());
    traj.spill.reserve(balances.size());
    traj.deficit.reserve(balances.size());

    double level = spec.s_init;
    for (double b : balances) {
        const StepResult r = step(level, b, spec);
        traj.s.push_back(r.s_next);
        traj.spill.push_back(r.spill);
        traj.deficit.push_back(r.deficit);
        level = r.s_next;
    }
    return traj;
}

Trajectory evolve(const StorageSpec& spec, std::span<const double> generation,
                  std::span<const double> demand) {
    if (generation.size() != demand.size()) {
        throw std::invalid_argument("evolve: generation and demand lengths differ");
    }
    std::vector<double> balances(generation.size());
    std::transform(generation.begin(), generation.end(), demand.begin(), balances.begin(),
                   std::minus<>{});
    Trajectory traj = evolve(spec, balances);
    traj.g.assign(generation.begin(), generation.end());
    traj.d.assign(demand.begin(), demand.end());
    return traj;
}

} // namespace gridstore

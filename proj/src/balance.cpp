#include "gridstore/balance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gridstore {

namespace {

constexpr std::size_t kMaxResampledCells = std::size_t{1} << 20;

DensityGrid point_mass(double at) { return DensityGrid{at, 1.0, {1.0}}; }

} // namespace

double DensityGrid::span() const {
    return is_atom() ? 0.0 : step * static_cast<double>(masses.size());
}

double DensityGrid::total_mass() const {
    return std::accumulate(masses.begin(), masses.end(), 0.0);
}

double DensityGrid::mean() const {
    if (is_atom()) return origin;
    double weighted = 0.0;
    for (std::size_t i = 0; i < masses.size(); ++i) {
        weighted += masses[i] * (origin + (static_cast<double>(i) + 0.5) * step);
    }
    return weighted / total_mass();
}

double DensityGrid::cumulative(double x) const {
    if (std::isnan(x)) throw std::invalid_argument("cumulative: x is NaN");
    if (is_atom()) return x >= origin ? masses.front() : 0.0;
    if (x <= origin) return 0.0;

    const double pos = (x - origin) / step;
    if (pos >= static_cast<double>(masses.size())) return total_mass();

    const auto cell = static_cast<std::size_t>(pos);
    double acc = 0.0;
    for (std::size_t i = 0; i < cell; ++i) acc += masses[i];
    return acc + masses[cell] * (pos - static_cast<double>(cell));
}

void DensityGrid::validate() const {
    if (masses.empty()) throw std::invalid_argument("density grid: no cells");
    if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("density grid: step must be > 0");
    if (!std::isfinite(origin)) throw std::invalid_argument("density grid: origin must be finite");
    for (double m : masses) {
        if (!(m >= 0.0)) throw std::invalid_argument("density grid: negative mass");
    }
    if (total_mass() > 1.0 + 1e-12) throw std::invalid_argument("density grid: total mass exceeds 1");
}

DensityGrid discretize(const Distribution& dist, std::size_t cells, double coverage) {
    if (cells < 2) throw std::invalid_argument("discretize: need at least 2 cells");
    if (!(coverage > 0.5 && coverage < 1.0)) {
        throw std::invalid_argument("discretize: coverage must lie in (0.5, 1)");
    }

    if (const auto* d = dist.as<Deterministic>()) return point_mass(d->value);

    if (dist.as<Empirical>()) {
        const auto& s = dist.sorted_samples();
        if (s.front() == s.back()) return point_mass(s.front());
        const double step = (s.back() - s.front()) / static_cast<double>(cells - 1);
        DensityGrid grid{s.front() - 0.5 * step, step, std::vector<double>(cells, 0.0)};
        const double weight = 1.0 / static_cast<double>(s.size());
        for (double x : s) {
            auto i = static_cast<std::size_t>(std::lround((x - s.front()) / step));
            grid.masses[std::min(i, cells - 1)] += weight;
        }
        return grid;
    }

    const double tail = 0.5 * (1.0 - coverage);
    const double lo = quantile(dist, tail);
    const double hi = quantile(dist, 1.0 - tail);
    const double step = (hi - lo) / static_cast<double>(cells);
    DensityGrid grid{lo, step, std::vector<double>(cells)};

    double left = cdf(dist, lo);
    for (std::size_t i = 0; i < cells; ++i) {
        const double edge = (i + 1 == cells) ? hi : lo + static_cast<double>(i + 1) * step;
        const double right = cdf(dist, edge);
        grid.masses[i] = std::max(0.0, right - left);
        left = right;
    }
    return grid;
}

DensityGrid resample(const DensityGrid& grid, double new_step) {
    if (!(new_step > 0.0)) throw std::invalid_argument("resample: step must be > 0");
    if (grid.is_atom()) return grid;

    const double cells_needed = std::ceil(grid.span() / new_step - 1e-9);
    if (!(cells_needed >= 1.0) || cells_needed > static_cast<double>(kMaxResampledCells)) {
        throw GridError("resample: grid steps differ too much to align");
    }
    const auto cells = static_cast<std::size_t>(cells_needed);

    DensityGrid out{grid.origin, new_step, std::vector<double>(cells)};
    // Walk both grids once, integrating the piecewise-uniform density.
    std::size_t src = 0;
    for (std::size_t i = 0; i < cells; ++i) {
        const double a = grid.origin + static_cast<double>(i) * new_step;
        const double b = a + new_step;
        while (src < grid.masses.size() &&
               grid.origin + static_cast<double>(src + 1) * grid.step <= a) {
            ++src;
        }
        double acc = 0.0;
        for (std::size_t j = src; j < grid.masses.size(); ++j) {
            const double ca = grid.origin + static_cast<double>(j) * grid.step;
            const double cb = ca + grid.step;
            if (ca >= b) break;
            const double overlap = std::min(b, cb) - std::max(a, ca);
            if (overlap > 0.0) acc += grid.masses[j] * overlap / grid.step;
        }
        out.masses[i] = acc;
    }
    return out;
}

DensityGrid difference_density(const DensityGrid& gen, const DensityGrid& dem) {
    gen.validate();
    dem.validate();

    if (gen.is_atom() && dem.is_atom()) {
        return DensityGrid{gen.origin - dem.origin, 1.0, {gen.masses[0] * dem.masses[0]}};
    }
    if (dem.is_atom()) {
        DensityGrid out = gen;
        out.origin = gen.origin - dem.origin;
        for (double& m : out.masses) m *= dem.masses[0];
        return out;
    }
    if (gen.is_atom()) {
        // a - D reflects D's cells about a.
        DensityGrid out{gen.origin - (dem.origin + dem.span()), dem.step,
                        std::vector<double>(dem.masses.rbegin(), dem.masses.rend())};
        for (double& m : out.masses) m *= gen.masses[0];
        return out;
    }

    const DensityGrid* g = &gen;
    const DensityGrid* d = &dem;
    DensityGrid aligned;
    if (std::abs(gen.step - dem.step) > 1e-12 * std::max(gen.step, dem.step)) {
        if (gen.step < dem.step) {
            aligned = resample(dem, gen.step);
            d = &aligned;
        } else {
            aligned = resample(gen, dem.step);
            g = &aligned;
        }
    }

    const std::size_t ng = g->masses.size();
    const std::size_t nd = d->masses.size();
    const double h = g->step;

    // A cell pair (i, j) gives a triangular law for G - D centred on the
    // boundary between output cells k and k + 1, k = i - j + nd - 1; half
    // of its mass falls on each side.
    std::vector<double> pair_sum(ng + nd - 1, 0.0);
    for (std::size_t i = 0; i < ng; ++i) {
        const double gi = g->masses[i];
        if (gi == 0.0) continue;
        const std::size_t base = i + nd - 1;
        for (std::size_t j = 0; j < nd; ++j) pair_sum[base - j] += gi * d->masses[j];
    }

    DensityGrid out{g->origin - (d->origin + static_cast<double>(nd) * h), h,
                    std::vector<double>(ng + nd, 0.0)};
    for (std::size_t k = 0; k < pair_sum.size(); ++k) {
        out.masses[k] += 0.5 * pair_sum[k];
        out.masses[k + 1] += 0.5 * pair_sum[k];
    }
    return out;
}

double interval_probability(const DensityGrid& grid, double lo, double hi) {
    if (std::isnan(lo) || std::isnan(hi)) throw std::invalid_argument("interval_probability: NaN bound");
    if (lo > hi) throw std::invalid_argument("interval_probability: lo > hi");
    if (lo == hi) return 0.0;
    return std::clamp(grid.cumulative(hi) - grid.cumulative(lo), 0.0, 1.0);
}

void BalanceQuery::validate() const {
    storage.validate();
    if (!std::isfinite(s_prev) || !storage.contains(s_prev)) {
        throw std::invalid_argument("s_prev outside storage window");
    }
}

OutcomeProbabilities self_sufficiency(const DensityGrid& balance, const BalanceQuery& query) {
    query.validate();
    const double total = balance.total_mass();
    const double below = balance.cumulative(query.deficit_threshold());
    const double up_to_max = balance.cumulative(query.overflow_threshold());
    return OutcomeProbabilities{
        .p_deficit = std::clamp(below, 0.0, 1.0),
        .p_overflow = std::clamp(total - up_to_max, 0.0, 1.0),
        .p_self = std::clamp(up_to_max - below, 0.0, 1.0),
        .truncated_mass = std::max(0.0, 1.0 - total),
    };
}

OutcomeProbabilities weibull_closed_form(double g_next, double s_prev, const StorageSpec& storage,
                                         const Weibull& demand) {
    storage.validate();
    if (!std::isfinite(s_prev) || !storage.contains(s_prev)) {
        throw std::invalid_argument("weibull_closed_form: s_prev outside storage window");
    }
    if (!(g_next >= 0.0) || !std::isfinite(g_next)) {
        throw std::invalid_argument("weibull_closed_form: generation must be >= 0");
    }
    static_cast<void>(Distribution(demand)); // validates scale and shape

    // Demand is supported on [0, inf), so nonpositive thresholds are certain
    // (event A) or impossible (event B).
    const double x_a = g_next + s_prev - storage.s_min;
    const double x_b = g_next + s_prev - storage.s_max;
    const double p_a = x_a <= 0.0 ? 1.0 : std::exp(-std::pow(x_a / demand.scale, demand.shape));
    const double p_b = x_b <= 0.0 ? 0.0 : -std::expm1(-std::pow(x_b / demand.scale, demand.shape));
    return OutcomeProbabilities{.p_deficit = p_a, .p_overflow = p_b, .p_self = 1.0 - p_a - p_b};
}

} // namespace gridstore

#include "gridstore/distribution.hpp"

#include "gridstore/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <boost/math/special_functions/erf.hpp>

namespace gridstore {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

void validate(const LogNormal& d) {
    require(std::isfinite(d.mu), "lognormal: mu must be finite");
    require(std::isfinite(d.sigma) && d.sigma > 0.0, "lognormal: sigma must be > 0");
}

void validate(const Weibull& d) {
    require(std::isfinite(d.scale) && d.scale > 0.0, "weibull: scale must be > 0");
    require(std::isfinite(d.shape) && d.shape > 0.0, "weibull: shape must be > 0");
}

void validate(const Deterministic& d) {
    require(std::isfinite(d.value) && d.value >= 0.0, "deterministic: value must be >= 0");
}

void validate(const Empirical& d) {
    require(!d.samples.empty(), "empirical: samples must be nonempty");
    for (double s : d.samples) {
        require(std::isfinite(s) && s >= 0.0, "empirical: samples must be >= 0");
    }
}

// Standard normal quantile.
double probit(double p) { return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p); }

} // namespace

std::string_view to_string(DistributionKind kind) {
    switch (kind) {
    case DistributionKind::lognormal: return "lognormal";
    case DistributionKind::weibull: return "weibull";
    case DistributionKind::deterministic: return "deterministic";
    case DistributionKind::empirical: return "empirical";
    }
    return "unknown";
}

Distribution::Distribution(Params params) : params_(std::move(params)) {
    std::visit([](const auto& d) { validate(d); }, params_);
    if (const auto* e = as<Empirical>()) {
        sorted_ = e->samples;
        std::sort(sorted_.begin(), sorted_.end());
    }
}

Distribution Distribution::lognormal(double mu, double sigma) {
    return Distribution(LogNormal{mu, sigma});
}

Distribution Distribution::weibull(double scale, double shape) {
    return Distribution(Weibull{scale, shape});
}

Distribution Distribution::deterministic(double value) {
    return Distribution(Deterministic{value});
}

Distribution Distribution::empirical(std::vector<double> samples) {
    return Distribution(Empirical{std::move(samples)});
}

DistributionKind Distribution::kind() const {
    return static_cast<DistributionKind>(params_.index());
}

bool Distribution::is_continuous() const {
    return kind() == DistributionKind::lognormal || kind() == DistributionKind::weibull;
}

double sample(const Distribution& dist, RandomStream& stream) {
    return std::visit(
        overloaded{
            [&](const LogNormal& d) { return std::exp(d.mu + d.sigma * stream.normal()); },
            [&](const Weibull& d) {
                return d.scale * std::pow(-std::log1p(-stream.uniform()), 1.0 / d.shape);
            },
            [](const Deterministic& d) { return d.value; },
            [&](const Empirical& d) {
                const auto n = d.samples.size();
                auto i = static_cast<std::size_t>(stream.uniform() * static_cast<double>(n));
                return d.samples[std::min(i, n - 1)];
            },
        },
        dist.params());
}

double cdf(const Distribution& dist, double x) {
    if (std::isnan(x)) throw std::domain_error("cdf: x is NaN");
    if (x < 0.0) return 0.0;
    return std::visit(
        overloaded{
            [x](const LogNormal& d) {
                if (x == 0.0) return 0.0;
                return 0.5 * std::erfc(-(std::log(x) - d.mu) / (d.sigma * std::numbers::sqrt2));
            },
            [x](const Weibull& d) { return -std::expm1(-std::pow(x / d.scale, d.shape)); },
            [x](const Deterministic& d) { return x >= d.value ? 1.0 : 0.0; },
            [x, &dist](const Empirical&) {
                const auto& s = dist.sorted_samples();
                const auto below = std::upper_bound(s.begin(), s.end(), x) - s.begin();
                return static_cast<double>(below) / static_cast<double>(s.size());
            },
        },
        dist.params());
}

double pdf(const Distribution& dist, double x) {
    return std::visit(
        overloaded{
            [x](const LogNormal& d) {
                if (x <= 0.0) return 0.0;
                const double z = (std::log(x) - d.mu) / d.sigma;
                return std::exp(-0.5 * z * z) /
                       (x * d.sigma * std::numbers::sqrt2 * std::sqrt(std::numbers::pi));
            },
            [x](const Weibull& d) {
                if (x < 0.0) return 0.0;
                const double r = x / d.scale;
                return d.shape / d.scale * std::pow(r, d.shape - 1.0) *
                       std::exp(-std::pow(r, d.shape));
            },
            [](const Deterministic&) -> double {
                throw UnsupportedVariant("pdf: deterministic distribution has no density");
            },
            [](const Empirical&) -> double {
                throw UnsupportedVariant("pdf: empirical distribution has no density");
            },
        },
        dist.params());
}

double quantile(const Distribution& dist, double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("quantile: p must lie in (0, 1)");
    return std::visit(
        overloaded{
            [p](const LogNormal& d) { return std::exp(d.mu + d.sigma * probit(p)); },
            [p](const Weibull& d) { return d.scale * std::pow(-std::log1p(-p), 1.0 / d.shape); },
            [](const Deterministic& d) { return d.value; },
            [p, &dist](const Empirical&) {
                const auto& s = dist.sorted_samples();
                const double n = static_cast<double>(s.size());
                auto k = static_cast<std::size_t>(std::ceil(p * n));
                return s[std::clamp<std::size_t>(k, 1, s.size()) - 1];
            },
        },
        dist.params());
}

double mean(const Distribution& dist) {
    return std::visit(
        overloaded{
            [](const LogNormal& d) { return std::exp(d.mu + 0.5 * d.sigma * d.sigma); },
            [](const Weibull& d) { return d.scale * std::tgamma(1.0 + 1.0 / d.shape); },
            [](const Deterministic& d) { return d.value; },
            [](const Empirical& d) {
                return std::accumulate(d.samples.begin(), d.samples.end(), 0.0) /
                       static_cast<double>(d.samples.size());
            },
        },
        dist.params());
}

double variance(const Distribution& dist) {
    return std::visit(
        overloaded{
            [](const LogNormal& d) {
                const double s2 = d.sigma * d.sigma;
                return std::expm1(s2) * std::exp(2.0 * d.mu + s2);
            },
            [](const Weibull& d) {
                const double g1 = std::tgamma(1.0 + 1.0 / d.shape);
                const double g2 = std::tgamma(1.0 + 2.0 / d.shape);
                return d.scale * d.scale * (g2 - g1 * g1);
            },
            [](const Deterministic&) { return 0.0; },
            [&dist](const Empirical& d) {
                const double m = mean(dist);
                double acc = 0.0;
                for (double s : d.samples) acc += (s - m) * (s - m);
                return acc / static_cast<double>(d.samples.size());
            },
        },
        dist.params());
}

Distribution lognormal_from_moments(double mean_value, double variance_value) {
    if (!(mean_value > 0.0) || !std::isfinite(mean_value)) {
        throw std::domain_error("lognormal_from_moments: mean must be > 0");
    }
    if (!(variance_value > 0.0) || !std::isfinite(variance_value)) {
        throw std::domain_error("lognormal_from_moments: variance must be > 0");
    }
    const double s2 = std::log1p(variance_value / (mean_value * mean_value));
    if (!(s2 > 0.0)) {
        throw std::domain_error("lognormal_from_moments: variance too small relative to mean");
    }
    return Distribution::lognormal(std::log(mean_value) - 0.5 * s2, std::sqrt(s2));
}

} // namespace gridstore

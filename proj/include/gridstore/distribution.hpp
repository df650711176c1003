#pragma once

#include <stdexcept>
#include <string_view>
#include <variant>
#include <vector>

namespace gridstore {

class RandomStream;

/// Log-normal with log-space location `mu` and log-space scale `sigma`.
struct LogNormal {
    double mu;
    double sigma;
    friend bool operator==(const LogNormal&, const LogNormal&) = default;
};

/// Weibull with F(y) = 1 - exp(-(y/scale)^shape).
struct Weibull {
    double scale;
    double shape;
    friend bool operator==(const Weibull&, const Weibull&) = default;
};

/// Known quantity, e.g. generation under a perfect forecast.
struct Deterministic {
    double value;
    friend bool operator==(const Deterministic&, const Deterministic&) = default;
};

/// Uniform choice among stored observations.
struct Empirical {
    std::vector<double> samples;
    friend bool operator==(const Empirical&, const Empirical&) = default;
};

enum class DistributionKind { lognormal, weibull, deterministic, empirical };

std::string_view to_string(DistributionKind kind);

/// Thrown when an operation is asked of a variant that has no such notion,
/// e.g. the density of a point mass.
class UnsupportedVariant : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Validated description of a nonnegative one-step random quantity
/// (generation or demand). Immutable after construction.
class Distribution {
public:
    using Params = std::variant<LogNormal, Weibull, Deterministic, Empirical>;

    static Distribution lognormal(double mu, double sigma);
    static Distribution weibull(double scale, double shape);
    static Distribution deterministic(double value);
    static Distribution empirical(std::vector<double> samples);

    /// Throws std::invalid_argument if `params` breaks a variant invariant.
    explicit Distribution(Params params);

    const Params& params() const { return params_; }
    DistributionKind kind() const;
    bool is_continuous() const;

    template <typename T>
    const T* as() const {
        return std::get_if<T>(&params_);
    }

    /// Ascending copy of the empirical samples; empty for other variants.
    const std::vector<double>& sorted_samples() const { return sorted_; }

    friend bool operator==(const Distribution& a, const Distribution& b) {
        return a.params_ == b.params_;
    }

private:
    Params params_;
    std::vector<double> sorted_;
};

double sample(const Distribution& dist, RandomStream& stream);

/// Pr[X <= x]. Zero for x < 0 for every variant.
double cdf(const Distribution& dist, double x);

/// Density of a continuous variant; throws UnsupportedVariant otherwise.
double pdf(const Distribution& dist, double x);

/// Inverse of cdf. Throws std::domain_error unless 0 < p < 1. For the
/// discrete variants returns the smallest x with cdf(x) >= p.
double quantile(const Distribution& dist, double p);

double mean(const Distribution& dist);
double variance(const Distribution& dist);

/// Log-normal whose first two moments are `mean_value` and `variance_value`.
/// Throws std::domain_error on nonpositive input.
Distribution lognormal_from_moments(double mean_value, double variance_value);

} // namespace gridstore

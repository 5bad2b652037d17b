#pragma once

#include <cstdint>
#include <variant>
#include <vector>

namespace urn {

/// Smallest heavy-ball rate accepted; below it the relaxation time overflows
/// the time grids used downstream.
inline constexpr double kMinHeavyRate = 1e-12;

/// One instance of the two-species urn: N balls, m of them heavy, heavy balls
/// refreshed at rate alpha and regular balls at rate 1.
///
/// The two-species regime is 1 <= m <= N-1 and 0 < alpha < 1. The degenerate
/// single-species configurations (m = 0, m = N, alpha = 1) are accepted and
/// reported through out_of_paper_range().
class ModelParams {
public:
    ModelParams(std::int64_t total_balls, std::int64_t heavy_count, double heavy_rate);

    std::int64_t total_balls() const noexcept { return total_; }
    std::int64_t heavy_count() const noexcept { return heavy_; }
    std::int64_t regular_count() const noexcept { return total_ - heavy_; }
    double heavy_rate() const noexcept { return rate_; }

    /// log(m) / log(N); -inf when m = 0, 0 when N = 1.
    double beta() const noexcept { return beta_; }
    double relaxation_time() const noexcept { return 1.0 / rate_; }
    bool out_of_paper_range() const noexcept;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;

private:
    std::int64_t total_;
    std::int64_t heavy_;
    double rate_;
    double beta_;
};

/// Initial configuration (r, h): regular and heavy balls in the left urn.
struct InitialState {
    std::int64_t regular_left = 0;
    std::int64_t heavy_left = 0;

    friend bool operator==(const InitialState&, const InitialState&) = default;
};

/// Throws DomainError unless 0 <= r <= n and 0 <= h <= m.
void validate(const ModelParams& params, const InitialState& init);

/// The four extreme states (0,0), (n,0), (0,m), (n,m), duplicates removed.
std::vector<InitialState> corner_states(const ModelParams& params);

/// (2 beta - 1) / alpha - 1. Sign separates insensitivity from the delayed regimes
/// of the ball-count observable.
double gamma(const ModelParams& params);

/// beta - alpha. Sign drives the regime of the full two-coordinate chain.
double tilde_gamma(const ModelParams& params);

/// (2 beta - 1) log N; its limit separates delayed cutoff from no cutoff.
double ell(const ModelParams& params);

struct PredictedTimes {
    double t_regular;   ///< (1/2) log N
    double t_heavy;     ///< beta / (2 alpha) log N
    double t_delayed;   ///< (1 + gamma) / 2 log N
};

PredictedTimes predicted_times(const ModelParams& params);

/// Same formulas on raw reals, so N need not be an integer.
PredictedTimes predicted_times(double total_balls, double beta, double heavy_rate);

// Parameter families: closed-form sequences m(N), alpha(N) sampled at a list of sizes.

struct FixedHeavy {
    std::int64_t count;
};
/// m = round(N^exponent)
struct PowerHeavy {
    double exponent;
};
/// m = round(scale * sqrt(N) * exp(ell / 2))
struct SqrtExpHeavy {
    double scale;
    double ell;
};
using HeavyRule = std::variant<FixedHeavy, PowerHeavy, SqrtExpHeavy>;

struct ConstantRate {
    double value;
};
/// alpha = numerator / log N
struct RateOverLog {
    double numerator;
};
using RateRule = std::variant<ConstantRate, RateOverLog>;

class ParamFamily {
public:
    /// Throws ValidationError if sizes are not strictly increasing with length >= 2,
    /// or DomainError if any sampled instance is invalid.
    ParamFamily(HeavyRule heavy, RateRule rate, std::vector<std::int64_t> sizes);

    const HeavyRule& heavy_rule() const noexcept { return heavy_; }
    const RateRule& rate_rule() const noexcept { return rate_; }
    const std::vector<std::int64_t>& sizes() const noexcept { return sizes_; }

    ModelParams at(std::int64_t total_balls) const;
    std::vector<ModelParams> instances() const;

private:
    HeavyRule heavy_;
    RateRule rate_;
    std::vector<std::int64_t> sizes_;
};

}  // namespace urn

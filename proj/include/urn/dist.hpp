#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "urn/model.hpp"

namespace urn {

/// Finite law on {0, ..., K}.
///
/// Construction clamps entries down to -1e-15 at zero, renormalizes when the
/// mass drifts from 1 by more than 1e-12, and rejects drift beyond 1e-9.
class Pmf {
public:
    explicit Pmf(std::vector<double> values);

    static Pmf point_mass(std::int64_t at, std::int64_t max_value);

    std::size_t support_size() const noexcept { return values_.size(); }
    std::int64_t max_value() const noexcept { return static_cast<std::int64_t>(values_.size()) - 1; }
    double operator[](std::size_t k) const noexcept { return values_[k]; }
    /// Zero outside the support.
    double at(std::int64_t k) const noexcept;
    std::span<const double> values() const noexcept { return values_; }

    double mean() const noexcept;
    double variance() const noexcept;
    /// P(X <= k)
    double cdf(std::int64_t k) const noexcept;

    /// k -> K - k
    Pmf mirrored() const;

private:
    std::vector<double> values_;
};

/// Joint law of (R, H) as the product of its two independent factors.
struct ProductLaw {
    Pmf regular;
    Pmf heavy;

    double operator()(std::int64_t a, std::int64_t b) const noexcept {
        return regular.at(a) * heavy.at(b);
    }
};

/// Survival probabilities of the two species at time t and the derived flip
/// probabilities p_t = (1 - e^{-alpha t})/2, q_t = (1 - e^{-t})/2.
struct SurvivalPair {
    double heavy_survival;
    double regular_survival;
    double heavy_flip;
    double regular_flip;
};

SurvivalPair survival(const ModelParams& params, double t);

/// Binomial(trials, success_prob), built from log-gamma terms.
Pmf binomial_pmf(std::int64_t trials, double success_prob);

/// Law of the sum of two independent variables. Direct O(K_a K_b) sum.
Pmf convolve(const Pmf& a, const Pmf& b);

/// Number of left-urn balls in a class of `count` balls refreshed at `rate`,
/// `ones_initial` of which started on the left.
Pmf coordinate_law(std::int64_t count, std::int64_t ones_initial, double rate, double t);

/// Law of W_t = R_t + H_t from the given initial state.
Pmf observed_law(const ModelParams& params, const InitialState& init, double t);

/// Law of (R_t, H_t) from the given initial state.
ProductLaw chain_law(const ModelParams& params, const InitialState& init, double t);

/// Binomial(N, 1/2).
Pmf stationary_observed(const ModelParams& params);

/// (Binomial(n, 1/2), Binomial(m, 1/2)).
ProductLaw stationary_chain(const ModelParams& params);

/// Half-L1 distance; the shorter support is zero padded.
double tv(const Pmf& a, const Pmf& b);

/// Total variation between two laws on the product grid {0..n} x {0..m}.
double tv_product(const ProductLaw& x, const ProductLaw& y);

enum class InitialStrategy { corners, full_scan };

/// Initial-state sets larger than this are refused by full_scan.
inline constexpr std::int64_t kFullScanLimit = 100'000;

/// Worst case over initial states of tv(observed_law, Binomial(N, 1/2)).
double observed_tv(const ModelParams& params, double t,
                   InitialStrategy strategy = InitialStrategy::corners);

/// Worst case over initial states of tv_product(chain_law, stationary_chain).
double chain_tv(const ModelParams& params, double t,
                InitialStrategy strategy = InitialStrategy::corners);

struct MeanVariance {
    double mean;
    double variance;
};

/// Closed-form mean and variance of the ball count started from (0, 0).
MeanVariance mean_and_variance_S(const ModelParams& params, double t);

}  // namespace urn

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "urn/dist.hpp"
#include "urn/model.hpp"

namespace urn {

/// Counter-based random stream: output j is a SplitMix64 hash of (key, j), with
/// the key derived from (seed, stream index). Streams need no shared state, so
/// draw i of a batch is the same under any thread schedule.
class CounterStream {
public:
    CounterStream(std::uint64_t seed, std::uint64_t stream_index) noexcept;

    std::uint64_t next_u64() noexcept;
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Exponential with the given rate.
    double exponential(double rate) noexcept;

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

struct Draw {
    std::int64_t regular;  ///< R_t
    std::int64_t heavy;    ///< H_t

    std::int64_t balls() const noexcept { return regular + heavy; }
    friend bool operator==(const Draw&, const Draw&) = default;
};

/// Exact draw of (R_t, H_t) from the explicit coupling: every ball carries a
/// survival indicator Bern(e^{-rate t}) and a fair coin; a surviving ball keeps
/// its initial side, the others take the coin's side.
Draw sample_coupled(const ModelParams& params, const InitialState& init, double t,
                    CounterStream& stream);

struct CtmcTrace {
    Draw draw;
    std::int64_t events;  ///< ball selections in [0, t]
};

/// Event-driven simulation of the continuous-time chain: exponential holding
/// times at total rate n + m alpha, selected ball re-placed by a fair coin.
CtmcTrace run_ctmc(const ModelParams& params, const InitialState& init, double t,
                   CounterStream& stream);

Draw sample_ctmc(const ModelParams& params, const InitialState& init, double t,
                 CounterStream& stream);

enum class Sampler { coupled, ctmc };

struct SampleBatch {
    ModelParams params;
    InitialState init;
    double t;
    std::uint64_t seed;
    Sampler sampler;
    std::vector<Draw> outcomes;
};

/// Draw i uses CounterStream(seed, i). Work is split over threads; output does
/// not depend on the thread count.
SampleBatch generate_batch(const ModelParams& params, const InitialState& init, double t,
                           std::uint64_t seed, std::int64_t count,
                           Sampler sampler = Sampler::coupled, unsigned threads = 0);

enum class Projection { W, R, H };

/// Normalized histogram of the projected outcomes.
Pmf empirical_pmf(const SampleBatch& batch, Projection projection);

struct TvEstimate {
    double estimate;
    /// sqrt((N + 1) / count): scale of the plug-in estimator's positive bias.
    double bias_bound;
    std::string note;
};

/// Plug-in estimate of tv(law of W_t, Binomial(N, 1/2)) from (0, 0) with
/// `count` coupled draws.
TvEstimate estimate_observed_tv(const ModelParams& params, double t, std::int64_t count,
                                std::uint64_t seed, const InitialState& init = {0, 0});

}  // namespace urn

#include "urn/mc.hpp"

#include <cmath>
#include <sstream>

#include "urn/error.hpp"
#include "urn/parallel.hpp"

namespace urn {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;

/// Left-urn count of one species: `left` of `count` balls start on the left.
std::int64_t coupled_species(std::int64_t count, std::int64_t left, double keep,
                             CounterStream& stream) {
    std::int64_t total = 0;
    for (std::int64_t i = 0; i < count; ++i) {
        const std::uint64_t bits = stream.next_u64();
        // Top 53 bits drive the survival indicator, the lowest bit is the coin.
        const bool survived = static_cast<double>(bits >> 11) * kTwoPow53Inv < keep;
        const bool on_left = survived ? i < left : (bits & 1U) != 0;
        total += on_left ? 1 : 0;
    }
    return total;
}

void check_time(double t) {
    if (!(t >= 0.0)) throw DomainError("time must be non-negative");
}

}  // namespace

CounterStream::CounterStream(std::uint64_t seed, std::uint64_t stream_index) noexcept
    : key_(mix64(seed ^ mix64(stream_index + kGolden))) {}

std::uint64_t CounterStream::next_u64() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * kGolden);
}

double CounterStream::uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * kTwoPow53Inv;
}

double CounterStream::exponential(double rate) noexcept {
    // 1 - U lies in (0, 1], so the log is finite.
    return -std::log1p(-uniform()) / rate;
}

Draw sample_coupled(const ModelParams& params, const InitialState& init, double t,
                    CounterStream& stream) {
    validate(params, init);
    check_time(t);
    const double keep_regular = std::exp(-t);
    const double keep_heavy = std::exp(-params.heavy_rate() * t);
    return Draw{
        coupled_species(params.regular_count(), init.regular_left, keep_regular, stream),
        coupled_species(params.heavy_count(), init.heavy_left, keep_heavy, stream),
    };
}

CtmcTrace run_ctmc(const ModelParams& params, const InitialState& init, double t,
                   CounterStream& stream) {
    validate(params, init);
    check_time(t);
    const double n = static_cast<double>(params.regular_count());
    const double m = static_cast<double>(params.heavy_count());
    const double regular_rate = n;
    const double total_rate = n + m * params.heavy_rate();
    CtmcTrace trace{Draw{init.regular_left, init.heavy_left}, 0};
    if (total_rate <= 0.0) return trace;
    double clock = 0.0;
    while (true) {
        clock += stream.exponential(total_rate);
        if (clock > t) break;
        ++trace.events;
        const bool regular = stream.uniform() * total_rate < regular_rate;
        std::int64_t& left = regular ? trace.draw.regular : trace.draw.heavy;
        const double size = regular ? n : m;
        // The selected ball is uniform within its class; it was on the left
        // with probability left / size, and lands on a fair-coin side.
        const bool was_left = stream.uniform() * size < static_cast<double>(left);
        const bool goes_left = (stream.next_u64() & 1U) != 0;
        left += (goes_left ? 1 : 0) - (was_left ? 1 : 0);
    }
    return trace;
}

Draw sample_ctmc(const ModelParams& params, const InitialState& init, double t,
                 CounterStream& stream) {
    return run_ctmc(params, init, t, stream).draw;
}

SampleBatch generate_batch(const ModelParams& params, const InitialState& init, double t,
                           std::uint64_t seed, std::int64_t count, Sampler sampler,
                           unsigned threads) {
    validate(params, init);
    check_time(t);
    if (count < 1) throw DomainError("sample count must be positive");
    SampleBatch batch{params, init, t, seed, sampler, {}};
    batch.outcomes.resize(static_cast<std::size_t>(count));
    parallel_chunks(batch.outcomes.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            CounterStream stream(seed, i);
            batch.outcomes[i] = sampler == Sampler::coupled
                                    ? sample_coupled(params, init, t, stream)
                                    : sample_ctmc(params, init, t, stream);
        }
    });
    return batch;
}

Pmf empirical_pmf(const SampleBatch& batch, Projection projection) {
    if (batch.outcomes.empty()) throw DomainError("empty batch");
    std::int64_t support = 0;
    switch (projection) {
        case Projection::W: support = batch.params.total_balls(); break;
        case Projection::R: support = batch.params.regular_count(); break;
        case Projection::H: support = batch.params.heavy_count(); break;
    }
    std::vector<std::int64_t> counts(static_cast<std::size_t>(support) + 1, 0);
    for (const auto& d : batch.outcomes) {
        const std::int64_t v = projection == Projection::W   ? d.balls()
                               : projection == Projection::R ? d.regular
                                                             : d.heavy;
        ++counts[static_cast<std::size_t>(v)];
    }
    const double total = static_cast<double>(batch.outcomes.size());
    std::vector<double> values(counts.size());
    for (std::size_t k = 0; k < counts.size(); ++k) values[k] = static_cast<double>(counts[k]) / total;
    return Pmf(std::move(values));
}

TvEstimate estimate_observed_tv(const ModelParams& params, double t, std::int64_t count,
                                std::uint64_t seed, const InitialState& init) {
    const auto batch = generate_batch(params, init, t, seed, count);
    const double estimate = tv(empirical_pmf(batch, Projection::W), stationary_observed(params));
    const double bias = std::sqrt(static_cast<double>(params.total_balls() + 1) /
                                  static_cast<double>(count));
    std::ostringstream note;
    note << "plug-in estimate is biased upward by up to about " << bias
         << "; compare against the exact curve";
    return TvEstimate{estimate, bias, note.str()};
}

}  // namespace urn

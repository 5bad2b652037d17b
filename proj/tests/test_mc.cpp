#include <doctest.h>

#include <cmath>
#include <map>

#include "urn/dist.hpp"
#include "urn/error.hpp"
#include "urn/mc.hpp"

using namespace urn;

TEST_CASE("counter streams are reproducible and independent of order") {
    CounterStream a(42, 7);
    CounterStream b(42, 7);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    CounterStream c(42, 8);
    CounterStream d(43, 7);
    CounterStream e(42, 7);
    CHECK(c.next_u64() != e.next_u64());
    CHECK(d.next_u64() != CounterStream(42, 7).next_u64());

    CounterStream u(1, 1);
    double sum = 0.0;
    for (int i = 0; i < 100'000; ++i) {
        const double x = u.uniform();
        CHECK_FALSE((x < 0.0 || x >= 1.0));
        sum += x;
    }
    CHECK(sum / 1e5 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("samplers at t = 0 return the initial state") {
    const ModelParams p(10, 3, 0.5);
    CounterStream s(1, 0);
    for (int i = 0; i < 20; ++i) {
        CHECK(sample_coupled(p, {4, 2}, 0.0, s) == Draw{4, 2});
        CHECK(sample_ctmc(p, {4, 2}, 0.0, s) == Draw{4, 2});
    }
}

TEST_CASE("coupled sampler at equilibrium") {
    const ModelParams p(40, 1, 1.0);
    const auto batch = generate_batch(p, {0, 0}, 1e6, 9, 100'000);
    double mean = 0.0;
    for (const auto& d : batch.outcomes) mean += static_cast<double>(d.balls());
    mean /= 1e5;
    CHECK(std::abs(mean - 20.0) <= 4.0 * std::sqrt(10.0 * 1e-5));
}

TEST_CASE("pinned draws for a fixed seed") {
    const ModelParams p(10, 3, 0.5);
    const auto batch = generate_batch(p, {0, 0}, 1.0, 42, 5);
    const std::vector<Draw> pinned{{0, 1}, {4, 0}, {5, 1}, {3, 0}, {3, 0}};
    CHECK(batch.outcomes == pinned);
}

TEST_CASE("batches do not depend on the thread count") {
    const ModelParams p(30, 7, 0.3);
    const auto one = generate_batch(p, {3, 2}, 1.2, 5, 4000, Sampler::coupled, 1);
    const auto four = generate_batch(p, {3, 2}, 1.2, 5, 4000, Sampler::coupled, 4);
    CHECK(one.outcomes == four.outcomes);
    const auto c1 = generate_batch(p, {3, 2}, 1.2, 5, 2000, Sampler::ctmc, 1);
    const auto c3 = generate_batch(p, {3, 2}, 1.2, 5, 2000, Sampler::ctmc, 3);
    CHECK(c1.outcomes == c3.outcomes);
    CHECK_THROWS_AS(generate_batch(p, {0, 0}, 1.0, 1, 0), DomainError);
}

TEST_CASE("event count of the continuous-time sampler") {
    const ModelParams p(12, 4, 0.25);
    const double t = 2.0;
    const double rate = (8.0 + 4.0 * 0.25) * t;
    double sum = 0.0;
    const int count = 40'000;
    for (int i = 0; i < count; ++i) {
        CounterStream s(77, static_cast<std::uint64_t>(i));
        sum += static_cast<double>(run_ctmc(p, {0, 0}, t, s).events);
    }
    const double se = std::sqrt(rate / count);
    CHECK(std::abs(sum / count - rate) <= 4.0 * se);
}

TEST_CASE("both samplers reproduce the exact joint law") {
    const ModelParams p(6, 2, 0.5);
    const InitialState init{1, 2};
    const double t = 1.0;
    const auto exact = chain_law(p, init, t);
    for (Sampler sampler : {Sampler::coupled, Sampler::ctmc}) {
        const auto batch = generate_batch(p, init, t, 2024, 100'000, sampler);
        std::map<std::pair<std::int64_t, std::int64_t>, double> freq;
        for (const auto& d : batch.outcomes) freq[{d.regular, d.heavy}] += 1.0 / 1e5;
        double dist = 0.0;
        for (std::int64_t a = 0; a <= 4; ++a)
            for (std::int64_t b = 0; b <= 2; ++b) dist += std::abs(freq[{a, b}] - exact(a, b));
        CHECK(0.5 * dist <= 0.01);
    }
}

TEST_CASE("empirical pmf") {
    const ModelParams p(10, 3, 0.5);
    const auto single = generate_batch(p, {2, 1}, 0.0, 1, 1);
    CHECK(empirical_pmf(single, Projection::W)[3] == 1.0);
    CHECK(empirical_pmf(single, Projection::R)[2] == 1.0);
    CHECK(empirical_pmf(single, Projection::H)[1] == 1.0);

    const auto batch = generate_batch(p, {0, 0}, 0.7, 3, 5000);
    const auto w = empirical_pmf(batch, Projection::W);
    double mass = 0.0;
    for (double v : w.values()) mass += v;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(w.support_size() == 11);
}

TEST_CASE("plug-in distance estimate") {
    const ModelParams p(20, 4, 0.5);
    const auto start = estimate_observed_tv(p, 0.0, 1000, 1);
    CHECK(start.estimate == doctest::Approx(1.0 - std::ldexp(1.0, -20)).epsilon(1e-12));
    const auto late = estimate_observed_tv(p, 1e6, 200'000, 2);
    CHECK(late.estimate <= late.bias_bound);
    CHECK(late.bias_bound == doctest::Approx(std::sqrt(21.0 / 2e5)));

    const auto mid = estimate_observed_tv(p, 1.5, 200'000, 3);
    const double exact = tv(observed_law(p, {0, 0}, 1.5), stationary_observed(p));
    CHECK(std::abs(mid.estimate - exact) <= mid.bias_bound + 3.0 * std::sqrt(0.25 / 2e5));
}

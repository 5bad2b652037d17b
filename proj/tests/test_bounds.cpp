#include <doctest.h>

#include <cmath>
#include <vector>

#include "urn/bounds.hpp"
#include "urn/dist.hpp"
#include "urn/error.hpp"
#include "urn/grid.hpp"

using namespace urn;

TEST_CASE("coupling union bound") {
    const ModelParams p(4, 2, 0.5);
    CHECK(coupling_union_bound(p, 0.0) == 4.0);
    CHECK(coupling_union_bound(p, 2.0) == doctest::Approx(1.0064302).epsilon(1e-6));
    double previous = coupling_union_bound(p, 0.0);
    for (double t = 0.1; t < 20.0; t += 0.1) {
        const double v = coupling_union_bound(p, t);
        CHECK(v < previous);
        previous = v;
    }
}

TEST_CASE("L2 upper bound") {
    const ModelParams p(4, 2, 0.5);
    CHECK(l2_upper_bound(p, 200.0) < 1e-40);
    // z = e^{-1}/2 + e^{-2}/2; bound = sqrt((1 + z^2)^4 - 1) / 2.
    const double z = 0.5 * std::exp(-1.0) + 0.5 * std::exp(-2.0);
    CHECK(z == doctest::Approx(0.2516074).epsilon(1e-6));
    CHECK(l2_upper_bound(p, 2.0) ==
          doctest::Approx(0.5 * std::sqrt(std::pow(1.0 + z * z, 4.0) - 1.0)).epsilon(1e-13));
    CHECK(l2_upper_bound(p, 2.0) == doctest::Approx(0.2637717).epsilon(1e-6));
    CHECK(l2_upper_bound(p, 0.0) == 1.0);

    for (std::int64_t m : {1, 5, 17}) {
        const ModelParams q(40, m, 1.0);
        for (double t : {0.5, 1.5, 4.0}) {
            const double expect = 0.5 * std::sqrt(std::pow(1.0 + std::exp(-2.0 * t), 40.0) - 1.0);
            CHECK(l2_upper_bound(q, t) == doctest::Approx(std::min(1.0, expect)).epsilon(1e-12));
        }
    }

    // At alpha = 1 and t = log(N)/2 + C the bound is sqrt((1 + e^{-2C}/N)^N - 1)/2.
    for (double c : {1.0, 2.0, 4.0}) {
        const double n = 10'000.0;
        const ModelParams q(10'000, 1, 1.0);
        const double at = l2_upper_bound(q, 0.5 * std::log(n) + c);
        const double closed = 0.5 * std::sqrt(std::pow(1.0 + std::exp(-2.0 * c) / n, n) - 1.0);
        CHECK(at == doctest::Approx(closed).epsilon(1e-9));
        CHECK(at <= std::sqrt(std::exp(std::exp(-2.0 * c)) - 1.0));
    }
}

TEST_CASE("product-chain upper bound") {
    CHECK(product_chain_upper_bound(ModelParams(10, 3, 0.5), 0.0) == 1.0);
    const ModelParams p(10'000, 1000, 0.2);
    const double t = predicted_times(p).t_heavy + 4.0 / 0.2;
    CHECK(product_chain_upper_bound(p, t) == doctest::Approx(0.0259).epsilon(1e-3 / 0.0259));
    CHECK(product_chain_upper_bound(p, t) <= std::sqrt(2.0 * std::exp(-8.0)) + 1e-6);
}

TEST_CASE("Chebyshev lower bound") {
    CHECK(chebyshev_lower_bound(ModelParams(100, 10, 0.5), 0.0) == doctest::Approx(0.92));
    CHECK(chebyshev_lower_bound(ModelParams(100, 10, 0.5), 50.0) == 0.0);
    CHECK(chebyshev_scale(ModelParams(101, 10, 0.5), 0.0) ==
          doctest::Approx((50.5 - 0.5) / std::sqrt(101.0)));
}

TEST_CASE("Kolmogorov lower bound") {
    const ModelParams p(4, 1, 0.5);
    CHECK(kolmogorov_lower_bound(p, 0.0) == doctest::Approx(0.9375));
    CHECK(kolmogorov_lower_bound(p, 1e3) < 1e-12);
}

TEST_CASE("normal CDF and the CLT estimate") {
    CHECK(normal_cdf(0.0) == 0.5);
    for (double x : {0.1, 0.9, 2.3, 5.0}) CHECK(normal_cdf(-x) == doctest::Approx(1.0 - normal_cdf(x)));
    CHECK(std::abs(normal_cdf(1.0) - 0.8413447460685429) < 1e-12);
    CHECK(normal_cdf(1.96) - normal_cdf(-1.96) == doctest::Approx(0.95).epsilon(1e-3));

    CHECK(clt_lower_bound(ModelParams(100, 10, 0.5), 1e3) == 0.0);

    const ModelParams nc(10'000, 272, 1.0 / std::log(1e4));
    const double t = 2.0 / nc.heavy_rate();
    CHECK(std::abs(clt_lower_bound(nc, t) - observed_tv(nc, t)) <= 0.05);
    CHECK_FALSE(is_certified(BoundKind::clt_lb));
    CHECK(is_certified(BoundKind::chebyshev_lb));
}

TEST_CASE("bounds sandwich the exact curves") {
    for (std::int64_t n_total : {7, 20, 51, 200}) {
        for (std::int64_t m : {std::int64_t{1}, n_total / 4 + 1, n_total - 1}) {
            for (double alpha : {0.05, 0.3, 1.0}) {
                const ModelParams p(n_total, m, alpha);
                for (double t : make_time_grid(0.01, 40.0, 25, Spacing::geometric)) {
                    const double cheb = chebyshev_lower_bound(p, t);
                    const double kolm = kolmogorov_lower_bound(p, t);
                    const double exact = observed_tv(p, t);
                    const double scan = n_total <= 51 ? observed_tv(p, t, InitialStrategy::full_scan) : exact;
                    CHECK(cheb <= kolm + 1e-12);
                    CHECK(kolm <= exact + 1e-12);
                    CHECK(exact <= scan + 1e-12);
                    CHECK(scan <= l2_upper_bound(p, t) + 1e-12);
                    CHECK(scan <= std::min(1.0, coupling_union_bound(p, t)) + 1e-12);
                    CHECK(chain_tv(p, t) <= product_chain_upper_bound(p, t) + 1e-12);
                }
            }
        }
    }
}

TEST_CASE("bounds are non-increasing in time") {
    const ModelParams p(300, 40, 0.25);
    const auto grid = make_time_grid(0.0, 60.0, 121, Spacing::linear);
    for (auto kind : {BoundKind::coupling_ub, BoundKind::l2_ub, BoundKind::chain_l2_ub,
                      BoundKind::chebyshev_lb, BoundKind::clt_lb, BoundKind::kolmogorov_lb}) {
        const auto curve = evaluate_bound(kind, p, grid);
        for (std::size_t i = 1; i < curve.points.size(); ++i)
            CHECK(curve.points[i].raw <= curve.points[i - 1].raw + 1e-12);
    }
}

TEST_CASE("bound curves") {
    const ModelParams p(50, 5, 0.5);
    const std::vector<double> grid{0.0, 1.0, 10.0};
    const auto coupling = evaluate_bound(BoundKind::coupling_ub, p, grid);
    CHECK(coupling.points[0].raw == 50.0);
    CHECK(coupling.points[0].value == 1.0);
    const auto exact = evaluate_bound(BoundKind::exact, p, grid);
    CHECK(exact.points[1].value == doctest::Approx(observed_tv(p, 1.0)));
    CHECK(to_string(BoundKind::kolmogorov_lb) == "kolmogorov_lb");
    CHECK_THROWS_AS(evaluate_bound(BoundKind::l2_ub, p, std::vector<double>{1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(l2_upper_bound(p, -1.0), DomainError);
}

TEST_CASE("time grids") {
    CHECK(make_time_grid(0.5, 9.0, 1, Spacing::linear) == make_time_grid(0.5, 9.0, 1, Spacing::geometric));
    const auto g = make_time_grid(0.1, 10.0, 3, Spacing::geometric);
    CHECK(g[1] == doctest::Approx(1.0));
    CHECK_THROWS_AS(make_time_grid(0.0, 1.0, 4, Spacing::geometric), DomainError);
    CHECK_THROWS_AS(make_time_grid(0.0, 1.0, 0, Spacing::linear), DomainError);
}

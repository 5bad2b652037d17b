#include "urn/negdep.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include "urn/dist.hpp"
#include "urn/error.hpp"

namespace urn {

namespace {

double log_choose(std::int64_t n, std::int64_t k) {
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

double falling(double x, std::int64_t k) {
    double out = 1.0;
    for (std::int64_t j = 0; j < k; ++j) out *= x - static_cast<double>(j);
    return out;
}

/// P(H = a) for H ~ Hypergeom(N, m, size), a outside the support gives 0.
std::vector<double> hypergeometric_pmf(std::int64_t total, std::int64_t marked, std::int64_t size) {
    std::vector<double> out(static_cast<std::size_t>(size) + 1, 0.0);
    const auto lo = std::max<std::int64_t>(0, size - (total - marked));
    const auto hi = std::min(size, marked);
    const double log_norm = log_choose(total, size);
    for (auto a = lo; a <= hi; ++a) {
        out[static_cast<std::size_t>(a)] =
            std::exp(log_choose(marked, a) + log_choose(total - marked, size - a) - log_norm);
    }
    return out;
}

void check_size(const ModelParams& params, std::int64_t size) {
    if (size < 1 || size > params.total_balls()) {
        std::ostringstream msg;
        msg << "subset size " << size << " outside [1, " << params.total_balls() << "]";
        throw DomainError(msg.str());
    }
}

std::int64_t checked_placements(const ModelParams& params) {
    if (params.total_balls() > 62) throw CapacityError("brute force limited to N <= 62");
    const double log_count = log_choose(params.total_balls(), params.heavy_count());
    if (log_count > std::log(static_cast<double>(kBruteForceLimit)) + 1e-9) {
        std::ostringstream msg;
        msg << "C(" << params.total_balls() << "," << params.heavy_count()
            << ") exceeds the brute-force limit " << kBruteForceLimit;
        throw CapacityError(msg.str());
    }
    return std::llround(std::exp(log_count));
}

/// Calls fn(mask) for every N-bit mask with exactly k bits set, in increasing order.
template <class Fn>
void for_each_subset(std::int64_t n, std::int64_t k, Fn fn) {
    if (k == 0) {
        fn(std::uint64_t{0});
        return;
    }
    if (k > n) return;
    std::uint64_t mask = (std::uint64_t{1} << k) - 1;
    const std::uint64_t limit = std::uint64_t{1} << n;
    while (mask < limit) {
        fn(mask);
        // Gosper's hack: next integer with the same popcount.
        const std::uint64_t low = mask & (~mask + 1);
        const std::uint64_t ripple = mask + low;
        mask = (((ripple ^ mask) >> 2) / low) | ripple;
    }
}

}  // namespace

double mean_Z(const ModelParams& params, double t) {
    const auto s = survival(params, t);
    const double n = static_cast<double>(params.total_balls());
    return static_cast<double>(params.heavy_count()) / n * s.heavy_survival +
           static_cast<double>(params.regular_count()) / n * s.regular_survival;
}

double joint_moment(const ModelParams& params, double t, std::int64_t size) {
    check_size(params, size);
    if (size == 1) return mean_Z(params, t);
    const auto s = survival(params, t);
    const auto weights = hypergeometric_pmf(params.total_balls(), params.heavy_count(), size);
    double out = 0.0;
    for (std::int64_t a = 0; a <= size; ++a) {
        const double w = weights[static_cast<std::size_t>(a)];
        if (w == 0.0) continue;
        out += w * std::pow(s.heavy_survival, static_cast<double>(a)) *
               std::pow(s.regular_survival, static_cast<double>(size - a));
    }
    return out;
}

double brute_force_joint_moment(const ModelParams& params, double t,
                                const std::vector<std::int64_t>& subset) {
    if (subset.empty()) throw DomainError("subset must be non-empty");
    std::uint64_t subset_mask = 0;
    for (auto i : subset) {
        if (i < 0 || i >= params.total_balls()) throw DomainError("subset index out of range");
        subset_mask |= std::uint64_t{1} << i;
    }
    if (std::popcount(subset_mask) != static_cast<int>(subset.size()))
        throw DomainError("subset indices must be distinct");
    const auto placements = checked_placements(params);
    const auto s = survival(params, t);
    const auto size = static_cast<int>(subset.size());
    double total = 0.0;
    for_each_subset(params.total_balls(), params.heavy_count(), [&](std::uint64_t heavy) {
        const int heavy_in_a = std::popcount(heavy & subset_mask);
        double prod = 1.0;
        for (int i = 0; i < heavy_in_a; ++i) prod *= s.heavy_survival;
        for (int i = heavy_in_a; i < size; ++i) prod *= s.regular_survival;
        total += prod;
    });
    return total / static_cast<double>(placements);
}

double brute_force_joint_moment(const ModelParams& params, double t, std::int64_t size) {
    check_size(params, size);
    std::vector<std::int64_t> subset(static_cast<std::size_t>(size));
    for (std::int64_t i = 0; i < size; ++i) subset[static_cast<std::size_t>(i)] = i;
    return brute_force_joint_moment(params, t, subset);
}

FactorialMoments factorial_moment_comparison(std::int64_t size, std::int64_t k,
                                             const ModelParams& params) {
    if (k < 1) throw DomainError("factorial moment order must be at least 1");
    if (size < 0 || size > params.total_balls()) throw DomainError("subset size outside [0, N]");
    if (k > size) return FactorialMoments{0.0, 0.0};
    const double n = static_cast<double>(params.total_balls());
    const double m = static_cast<double>(params.heavy_count());
    const double head = falling(static_cast<double>(size), k);
    return FactorialMoments{
        .binomial = head * std::pow(m / n, static_cast<double>(k)),
        .hypergeometric = head * falling(m, k) / falling(n, k),
    };
}

MgfPair mgf_compare(double u, std::int64_t size, const ModelParams& params) {
    if (!(u >= 1.0)) throw DomainError("generating functions are compared only for u >= 1");
    if (size < 0 || size > params.total_balls()) throw DomainError("subset size outside [0, N]");
    const double ratio =
        static_cast<double>(params.heavy_count()) / static_cast<double>(params.total_balls());
    const auto bin = binomial_pmf(size, ratio);
    const auto hyp = hypergeometric_pmf(params.total_balls(), params.heavy_count(), size);
    MgfPair out{0.0, 0.0};
    for (std::int64_t j = 0; j <= size; ++j) {
        const double power = std::pow(u, static_cast<double>(j));
        out.binomial += bin[static_cast<std::size_t>(j)] * power;
        out.hypergeometric += hyp[static_cast<std::size_t>(j)] * power;
    }
    return out;
}

NegDepReport verify_negative_dependence(const ModelParams& params, double t, std::int64_t max_size) {
    check_size(params, max_size);
    NegDepReport report{params, t, {}, std::numeric_limits<double>::infinity(), false, true};
    report.brute_force_checked =
        params.total_balls() <= 62 &&
        log_choose(params.total_balls(), params.heavy_count()) <=
            std::log(static_cast<double>(kBruteForceLimit)) + 1e-9;
    const double mean = mean_Z(params, t);
    for (std::int64_t size = 1; size <= max_size; ++size) {
        NegDepRow row{};
        row.size = size;
        row.joint_moment = joint_moment(params, t, size);
        row.product_moment = size == 1 ? mean : std::pow(mean, static_cast<double>(size));
        row.slack = row.product_moment - row.joint_moment;
        row.brute_force = std::numeric_limits<double>::quiet_NaN();
        if (report.brute_force_checked) {
            row.brute_force = brute_force_joint_moment(params, t, size);
            if (std::abs(row.brute_force - row.joint_moment) > kNegDepTolerance) report.pass = false;
        }
        report.min_slack = std::min(report.min_slack, row.slack);
        report.rows.push_back(row);
    }
    if (report.min_slack < -kNegDepTolerance) report.pass = false;
    return report;
}

std::vector<double> configuration_law(const ModelParams& params, const InitialState& init, double t) {
    validate(params, init);
    const auto n_balls = params.total_balls();
    if (n_balls > kChiSquareMaxBalls) {
        std::ostringstream msg;
        msg << "configuration law enumerates 2^N states; N = " << n_balls << " exceeds "
            << kChiSquareMaxBalls;
        throw CapacityError(msg.str());
    }
    const auto s = survival(params, t);
    const auto states = std::size_t{1} << n_balls;
    const auto left = init.regular_left + init.heavy_left;
    std::vector<double> law(states, 0.0);
    std::vector<double> product(states);
    double patterns = 0.0;

    // Under a uniform relabeling, the (heavy, initially-left) pattern is uniform over
    // pairs of masks with |heavy| = m, |left| = r + h and |heavy & left| = h.
    for_each_subset(n_balls, params.heavy_count(), [&](std::uint64_t heavy) {
        for_each_subset(n_balls, left, [&](std::uint64_t start) {
            if (std::popcount(heavy & start) != init.heavy_left) return;
            patterns += 1.0;
            product[0] = 1.0;
            std::size_t filled = 1;
            for (std::int64_t i = 0; i < n_balls; ++i) {
                const std::uint64_t bit = std::uint64_t{1} << i;
                const double flip = (heavy & bit) ? s.heavy_flip : s.regular_flip;
                const double p_left = (start & bit) ? 1.0 - flip : flip;
                for (std::size_t x = 0; x < filled; ++x) {
                    product[x | bit] = product[x] * p_left;
                    product[x] *= 1.0 - p_left;
                }
                filled <<= 1;
            }
            for (std::size_t x = 0; x < states; ++x) law[x] += product[x];
        });
    });
    for (double& v : law) v /= patterns;
    return law;
}

double exact_chi_square(const ModelParams& params, const InitialState& init, double t) {
    const auto law = configuration_law(params, init, t);
    const double states = static_cast<double>(law.size());
    double s = 0.0;
    for (double v : law) s += v * v;
    return states * s - 1.0;
}

double chi_square_bound(const ModelParams& params, double t) {
    const double z = mean_Z(params, t);
    return std::expm1(static_cast<double>(params.total_balls()) * std::log1p(z * z));
}

}  // namespace urn

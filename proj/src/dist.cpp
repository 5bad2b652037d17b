#include "urn/dist.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "urn/error.hpp"

namespace urn {

namespace {

constexpr double kClampFloor = -1e-15;
constexpr double kRenormTolerance = 1e-12;
constexpr double kMassTolerance = 1e-9;

double log_choose(std::int64_t n, std::int64_t k) {
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace

Pmf::Pmf(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw DomainError("a pmf needs at least one outcome");
    for (double& v : values_) {
        if (!std::isfinite(v)) throw DomainError("pmf entry is not finite");
        if (v < 0.0) {
            if (v < kClampFloor) throw DomainError("pmf entry is negative");
            v = 0.0;
        }
    }
    const double mass = std::accumulate(values_.begin(), values_.end(), 0.0);
    if (std::abs(mass - 1.0) > kMassTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "pmf mass " << mass << " is not 1";
        throw DomainError(msg.str());
    }
    if (std::abs(mass - 1.0) > kRenormTolerance) {
        for (double& v : values_) v /= mass;
    }
}

Pmf Pmf::point_mass(std::int64_t at, std::int64_t max_value) {
    if (at < 0 || at > max_value) throw DomainError("point mass outside support");
    std::vector<double> v(static_cast<std::size_t>(max_value) + 1, 0.0);
    v[static_cast<std::size_t>(at)] = 1.0;
    return Pmf(std::move(v));
}

double Pmf::at(std::int64_t k) const noexcept {
    if (k < 0 || k > max_value()) return 0.0;
    return values_[static_cast<std::size_t>(k)];
}

double Pmf::mean() const noexcept {
    double s = 0.0;
    for (std::size_t k = 0; k < values_.size(); ++k) s += static_cast<double>(k) * values_[k];
    return s;
}

double Pmf::variance() const noexcept {
    const double mu = mean();
    double s = 0.0;
    for (std::size_t k = 0; k < values_.size(); ++k) {
        const double d = static_cast<double>(k) - mu;
        s += d * d * values_[k];
    }
    return s;
}

double Pmf::cdf(std::int64_t k) const noexcept {
    if (k < 0) return 0.0;
    const auto last = std::min<std::int64_t>(k, max_value());
    double s = 0.0;
    for (std::int64_t j = 0; j <= last; ++j) s += values_[static_cast<std::size_t>(j)];
    return std::min(s, 1.0);
}

Pmf Pmf::mirrored() const {
    std::vector<double> v(values_.rbegin(), values_.rend());
    return Pmf(std::move(v));
}

SurvivalPair survival(const ModelParams& params, double t) {
    if (!(t >= 0.0)) throw DomainError("time must be non-negative");
    const double heavy_t = params.heavy_rate() * t;
    return SurvivalPair{
        .heavy_survival = std::exp(-heavy_t),
        .regular_survival = std::exp(-t),
        .heavy_flip = -0.5 * std::expm1(-heavy_t),
        .regular_flip = -0.5 * std::expm1(-t),
    };
}

Pmf binomial_pmf(std::int64_t trials, double success_prob) {
    if (trials < 0) throw DomainError("binomial trials must be non-negative");
    if (!(success_prob >= 0.0 && success_prob <= 1.0))
        throw DomainError("binomial success probability outside [0, 1]");
    if (success_prob == 0.0) return Pmf::point_mass(0, trials);
    if (success_prob == 1.0) return Pmf::point_mass(trials, trials);

    const auto size = static_cast<std::size_t>(trials) + 1;
    const double log_p = std::log(success_prob);
    const double log_q = std::log1p(-success_prob);
    std::vector<double> logs(size);
    for (std::int64_t k = 0; k <= trials; ++k) {
        logs[static_cast<std::size_t>(k)] = log_choose(trials, k) + static_cast<double>(k) * log_p +
                                            static_cast<double>(trials - k) * log_q;
    }
    const double peak = *std::max_element(logs.begin(), logs.end());
    double mass = 0.0;
    for (double& v : logs) {
        v = std::exp(v - peak);
        mass += v;
    }
    for (double& v : logs) v /= mass;
    return Pmf(std::move(logs));
}

Pmf convolve(const Pmf& a, const Pmf& b) {
    const auto& small = a.support_size() <= b.support_size() ? a : b;
    const auto& large = a.support_size() <= b.support_size() ? b : a;
    std::vector<double> out(a.support_size() + b.support_size() - 1, 0.0);
    const auto lv = large.values();
    for (std::size_t i = 0; i < small.support_size(); ++i) {
        const double w = small[i];
        if (w == 0.0) continue;
        double* dst = out.data() + i;
        for (std::size_t j = 0; j < lv.size(); ++j) dst[j] += w * lv[j];
    }
    return Pmf(std::move(out));
}

Pmf coordinate_law(std::int64_t count, std::int64_t ones_initial, double rate, double t) {
    if (count < 0 || ones_initial < 0 || ones_initial > count)
        throw DomainError("coordinate_law needs 0 <= ones_initial <= count");
    if (!(rate > 0.0)) throw DomainError("rate must be positive");
    if (!(t >= 0.0)) throw DomainError("time must be non-negative");
    // Each ball sits on the side opposite its start with probability (1 - e^{-rate t})/2.
    // Balls starting on the left are counted unless flipped: Binomial(ones, 1 - flip),
    // built as a mirrored Binomial(ones, flip) to keep flip exact for small t.
    const double flip = -0.5 * std::expm1(-rate * t);
    return convolve(binomial_pmf(ones_initial, flip).mirrored(),
                    binomial_pmf(count - ones_initial, flip));
}

ProductLaw chain_law(const ModelParams& params, const InitialState& init, double t) {
    validate(params, init);
    return ProductLaw{
        coordinate_law(params.regular_count(), init.regular_left, 1.0, t),
        coordinate_law(params.heavy_count(), init.heavy_left, params.heavy_rate(), t),
    };
}

Pmf observed_law(const ModelParams& params, const InitialState& init, double t) {
    const auto law = chain_law(params, init, t);
    return convolve(law.regular, law.heavy);
}

Pmf stationary_observed(const ModelParams& params) {
    return binomial_pmf(params.total_balls(), 0.5);
}

ProductLaw stationary_chain(const ModelParams& params) {
    return ProductLaw{binomial_pmf(params.regular_count(), 0.5),
                      binomial_pmf(params.heavy_count(), 0.5)};
}

double tv(const Pmf& a, const Pmf& b) {
    const auto size = std::max(a.support_size(), b.support_size());
    double s = 0.0;
    for (std::size_t k = 0; k < size; ++k) {
        const auto idx = static_cast<std::int64_t>(k);
        s += std::abs(a.at(idx) - b.at(idx));
    }
    return std::clamp(0.5 * s, 0.0, 1.0);
}

double tv_product(const ProductLaw& x, const ProductLaw& y) {
    if (x.regular.support_size() != y.regular.support_size() ||
        x.heavy.support_size() != y.heavy.support_size())
        throw DomainError("tv_product needs matching factor supports");
    const auto xr = x.regular.values();
    const auto xh = x.heavy.values();
    const auto yr = y.regular.values();
    const auto yh = y.heavy.values();
    double s = 0.0;
    for (std::size_t a = 0; a < xr.size(); ++a) {
        const double pa = xr[a];
        const double qa = yr[a];
        for (std::size_t b = 0; b < xh.size(); ++b) s += std::abs(pa * xh[b] - qa * yh[b]);
    }
    return std::clamp(0.5 * s, 0.0, 1.0);
}

namespace {

void check_scan_capacity(const ModelParams& params) {
    const auto states = (params.regular_count() + 1) * (params.heavy_count() + 1);
    if (states > kFullScanLimit) {
        std::ostringstream msg;
        msg << "full scan over " << states << " initial states exceeds the limit of "
            << kFullScanLimit;
        throw CapacityError(msg.str());
    }
}

// Worst case of `distance(regular_law, heavy_law)` over the chosen initial states.
// Coordinate laws depend only on their own initial count, so each is built once.
template <class Distance>
double worst_case(const ModelParams& params, double t, InitialStrategy strategy,
                  Distance distance) {
    if (!(t >= 0.0)) throw DomainError("time must be non-negative");
    const auto n = params.regular_count();
    const auto m = params.heavy_count();
    std::vector<std::int64_t> rs;
    std::vector<std::int64_t> hs;
    if (strategy == InitialStrategy::corners) {
        rs = n == 0 ? std::vector<std::int64_t>{0} : std::vector<std::int64_t>{0, n};
        hs = m == 0 ? std::vector<std::int64_t>{0} : std::vector<std::int64_t>{0, m};
    } else {
        check_scan_capacity(params);
        rs.resize(static_cast<std::size_t>(n) + 1);
        hs.resize(static_cast<std::size_t>(m) + 1);
        std::iota(rs.begin(), rs.end(), 0);
        std::iota(hs.begin(), hs.end(), 0);
    }
    std::vector<Pmf> regular;
    std::vector<Pmf> heavy;
    for (auto r : rs) regular.push_back(coordinate_law(n, r, 1.0, t));
    for (auto h : hs) heavy.push_back(coordinate_law(m, h, params.heavy_rate(), t));
    double worst = 0.0;
    for (const auto& reg : regular) {
        for (const auto& hv : heavy) worst = std::max(worst, distance(reg, hv));
    }
    return worst;
}

}  // namespace

double observed_tv(const ModelParams& params, double t, InitialStrategy strategy) {
    const auto target = stationary_observed(params);
    return worst_case(params, t, strategy, [&](const Pmf& reg, const Pmf& hv) {
        return tv(convolve(reg, hv), target);
    });
}

double chain_tv(const ModelParams& params, double t, InitialStrategy strategy) {
    const auto target = stationary_chain(params);
    return worst_case(params, t, strategy, [&](const Pmf& reg, const Pmf& hv) {
        return tv_product(ProductLaw{reg, hv}, target);
    });
}

MeanVariance mean_and_variance_S(const ModelParams& params, double t) {
    const auto s = survival(params, t);
    const double m = static_cast<double>(params.heavy_count());
    const double n = static_cast<double>(params.regular_count());
    const double p = s.heavy_flip;
    const double q = s.regular_flip;
    return MeanVariance{
        .mean = m * p + n * q,
        .variance = m * p * (1.0 - p) + n * q * (1.0 - q),
    };
}

}  // namespace urn

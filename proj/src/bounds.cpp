#include "urn/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "urn/dist.hpp"
#include "urn/error.hpp"
#include "urn/negdep.hpp"

namespace urn {

namespace {

void check_time(double t) {
    if (!(t >= 0.0)) throw DomainError("time must be non-negative");
}

double clamp_unit(double x) { return std::isnan(x) ? 1.0 : std::clamp(x, 0.0, 1.0); }

}  // namespace

double coupling_union_bound(const ModelParams& params, double t) {
    check_time(t);
    const auto s = survival(params, t);
    return static_cast<double>(params.heavy_count()) * s.heavy_survival +
           static_cast<double>(params.regular_count()) * s.regular_survival;
}

double l2_upper_bound(const ModelParams& params, double t) {
    check_time(t);
    const double z = mean_Z(params, t);
    const double n = static_cast<double>(params.total_balls());
    const double chi_square = std::expm1(n * std::log1p(z * z));
    return clamp_unit(0.5 * std::sqrt(chi_square));
}

double product_chain_upper_bound(const ModelParams& params, double t) {
    check_time(t);
    const double m = static_cast<double>(params.heavy_count());
    const double n = static_cast<double>(params.total_balls());
    const double sq = 2.0 * m * std::exp(-2.0 * params.heavy_rate() * t) + 2.0 * n * std::exp(-2.0 * t);
    return clamp_unit(std::sqrt(sq));
}

double chebyshev_scale(const ModelParams& params, double t) {
    const auto n = params.total_balls();
    const double half_shift = n % 2 == 0 ? 0.0 : 0.5;
    const double gap = 0.5 * static_cast<double>(n) - mean_and_variance_S(params, t).mean;
    return (gap - half_shift) / std::sqrt(static_cast<double>(n));
}

double chebyshev_lower_bound(const ModelParams& params, double t) {
    check_time(t);
    const double c = chebyshev_scale(params, t);
    // With k = ceil(c sqrt(N) / 2) each Chebyshev tail is at most 1/c^2.
    if (c <= std::sqrt(2.0)) return 0.0;
    return 1.0 - 2.0 / (c * c);
}

double kolmogorov_lower_bound(const ModelParams& params, double t) {
    check_time(t);
    const auto law = observed_law(params, InitialState{0, 0}, t);
    const auto target = stationary_observed(params);
    double f_law = 0.0;
    double f_target = 0.0;
    double best = 0.0;
    for (std::size_t k = 0; k < law.support_size(); ++k) {
        f_law += law[k];
        f_target += target[k];
        best = std::max(best, std::abs(f_law - f_target));
    }
    return clamp_unit(best);
}

double clt_lower_bound(const ModelParams& params, double t, double slack) {
    check_time(t);
    const double n = static_cast<double>(params.total_balls());
    const double c = (0.5 * n - mean_and_variance_S(params, t).mean) / std::sqrt(n);
    return std::max(0.0, normal_cdf(c) - normal_cdf(-c) - slack);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

std::string_view to_string(BoundKind kind) {
    switch (kind) {
        case BoundKind::coupling_ub: return "coupling_ub";
        case BoundKind::l2_ub: return "l2_ub";
        case BoundKind::chain_l2_ub: return "chain_l2_ub";
        case BoundKind::chebyshev_lb: return "chebyshev_lb";
        case BoundKind::clt_lb: return "clt_lb";
        case BoundKind::kolmogorov_lb: return "kolmogorov_lb";
        case BoundKind::exact: return "exact";
    }
    return "unknown";
}

bool is_certified(BoundKind kind) { return kind != BoundKind::clt_lb; }

BoundCurve evaluate_bound(BoundKind kind, const ModelParams& params, std::span<const double> grid) {
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) throw DomainError("bound grid must be strictly increasing");
    }
    BoundCurve curve{kind, params, {}};
    curve.points.reserve(grid.size());
    for (double t : grid) {
        double raw = 0.0;
        switch (kind) {
            case BoundKind::coupling_ub: raw = coupling_union_bound(params, t); break;
            case BoundKind::l2_ub: raw = l2_upper_bound(params, t); break;
            case BoundKind::chain_l2_ub: raw = product_chain_upper_bound(params, t); break;
            case BoundKind::chebyshev_lb: raw = chebyshev_lower_bound(params, t); break;
            case BoundKind::clt_lb: raw = clt_lower_bound(params, t); break;
            case BoundKind::kolmogorov_lb: raw = kolmogorov_lower_bound(params, t); break;
            case BoundKind::exact: raw = observed_tv(params, t); break;
        }
        curve.points.push_back(BoundPoint{t, clamp_unit(raw), raw});
    }
    return curve;
}

}  // namespace urn

#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "urn/model.hpp"

namespace urn {

// Analytic bounds on the observable distance D(t) and the chain distance D~(t).
// Every bound uses the integer heavy count m, never the real N^beta.

/// Expected number of balls never selected by time t: m e^{-alpha t} + (N - m) e^{-t}.
/// Upper-bounds D(t) through the coupling; unclamped, so it may exceed 1.
double coupling_union_bound(const ModelParams& params, double t);

/// (1/2) sqrt((1 + z^2)^N - 1) clamped to 1, with z the mean survival indicator.
/// Follows from the L2(pi) bound under negative dependence.
double l2_upper_bound(const ModelParams& params, double t);

/// sqrt(2 m e^{-2 alpha t} + 2 N e^{-2t}) clamped to 1. Bounds D~(t).
double product_chain_upper_bound(const ModelParams& params, double t);

/// Certified lower bound on D(t) from the half-line event {W <= N/2 - k} and
/// Chebyshev's inequality on both laws; see chebyshev_scale().
double chebyshev_lower_bound(const ModelParams& params, double t);

/// c = (N/2 - E[S(t)] - delta) / sqrt(N) with delta = 1/2 for odd N and 0 otherwise.
/// The half shift keeps the Chebyshev estimate rigorous when N/2 is not an integer.
double chebyshev_scale(const ModelParams& params, double t);

/// Kolmogorov distance between the law of W_t from (0, 0) and Binomial(N, 1/2),
/// i.e. the best single half-line event. Certified lower bound on D(t).
double kolmogorov_lower_bound(const ModelParams& params, double t);

/// Phi(c) - Phi(-c) - slack, floored at 0, with c = (N/2 - E[S(t)]) / sqrt(N).
/// Only a large-N approximation; not a certified bound.
double clt_lower_bound(const ModelParams& params, double t, double slack = 0.0);

/// Standard normal CDF.
double normal_cdf(double x);

enum class BoundKind {
    coupling_ub,
    l2_ub,
    chain_l2_ub,
    chebyshev_lb,
    clt_lb,
    kolmogorov_lb,
    exact,
};

std::string_view to_string(BoundKind kind);

/// False only for the CLT approximation.
bool is_certified(BoundKind kind);

struct BoundPoint {
    double t;
    double value;  ///< clamped to [0, 1]
    double raw;    ///< before clamping; differs only for coupling_ub
};

struct BoundCurve {
    BoundKind kind;
    ModelParams params;
    std::vector<BoundPoint> points;
};

/// Samples one bound on a strictly increasing time grid. `exact` is the
/// corner-maximized observable distance.
BoundCurve evaluate_bound(BoundKind kind, const ModelParams& params, std::span<const double> grid);

}  // namespace urn

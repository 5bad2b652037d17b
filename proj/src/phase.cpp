#include "urn/phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "urn/error.hpp"

namespace urn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool agree(double a, double b) {
    return std::abs(a - b) <= kLimitAgreement * std::max(std::abs(a), std::abs(b)) + 1e-12;
}

/// Limit of a sequence from its last two values, or nullopt.
std::optional<double> extrapolate_limit(double previous, double last) {
    if (!std::isfinite(previous) || !std::isfinite(last)) {
        if (previous == last) return last;
        return std::nullopt;
    }
    if (agree(previous, last)) return last;
    const bool same_sign = (previous < 0.0 && last < 0.0) || (previous > 0.0 && last > 0.0);
    if (same_sign && std::abs(last) > std::abs(previous)) return last < 0.0 ? -kInf : kInf;
    return std::nullopt;
}

/// True when growing past the divergence threshold, false when settled, nullopt otherwise.
std::optional<bool> divergence(double previous, double last) {
    if (last > 0.0 && last > (1.0 + kDivergenceGrowth) * std::max(previous, 0.0) &&
        previous >= 0.0)
        return true;
    if (agree(previous, last)) return false;
    return std::nullopt;
}

double default_hint(const ModelParams& params, Target target) {
    const auto times = predicted_times(params);
    double hint = times.t_regular;
    if (target == Target::chain) {
        hint = std::max(times.t_regular, times.t_heavy);
    } else if (gamma(params) >= 0.0) {
        hint = std::max(times.t_regular, times.t_delayed);
    }
    if (!(hint > 0.0)) hint = params.relaxation_time();
    return hint;
}

}  // namespace

std::string_view to_string(Regime regime) {
    switch (regime) {
        case Regime::Insensitivity: return "Insensitivity";
        case Regime::DelayedCutoff: return "DelayedCutoff";
        case Regime::NoCutoff: return "NoCutoff";
        case Regime::Undetermined: return "Undetermined";
    }
    return "Undetermined";
}

std::optional<Regime> parse_regime(std::string_view text) {
    for (auto r : {Regime::Insensitivity, Regime::DelayedCutoff, Regime::NoCutoff,
                   Regime::Undetermined}) {
        if (text == to_string(r)) return r;
    }
    return std::nullopt;
}

std::string_view to_string(Target target) {
    return target == Target::observable ? "observable" : "chain";
}

double distance(const ModelParams& params, double t, Target target, InitialStrategy strategy) {
    return target == Target::observable ? observed_tv(params, t, strategy)
                                        : chain_tv(params, t, strategy);
}

std::pair<Regime, Regime> regimes_from_limits(const DeclaredLimits& limits) {
    std::vector<std::string> violations;
    if (std::isnan(limits.gamma_inf) || std::isnan(limits.tilde_gamma_inf) || std::isnan(limits.ell))
        violations.emplace_back("declared limits must not be NaN");
    if (limits.tilde_gamma_inf < -1.0 || limits.tilde_gamma_inf > 1.0)
        violations.emplace_back("tilde_gamma_inf must lie in [-1, 1]");
    if (limits.tilde_gamma_inf < 0.0 && !(limits.gamma_inf < 0.0))
        violations.emplace_back("tilde_gamma_inf < 0 implies gamma_inf < 0");
    if (limits.gamma_inf >= 0.0) {
        if (limits.tilde_gamma_inf < 0.0)
            violations.emplace_back("gamma_inf >= 0 implies tilde_gamma_inf >= 0");
        if (!limits.m_diverges) violations.emplace_back("gamma_inf >= 0 implies m -> infinity");
        if (limits.ell < 0.0) violations.emplace_back("gamma_inf >= 0 implies ell >= 0");
    }

    Regime observable = Regime::Insensitivity;
    if (limits.gamma_inf >= 0.0)
        observable = std::isinf(limits.ell) ? Regime::DelayedCutoff : Regime::NoCutoff;
    Regime chain = Regime::Insensitivity;
    if (limits.tilde_gamma_inf >= 0.0)
        chain = limits.m_diverges ? Regime::DelayedCutoff : Regime::NoCutoff;

    if (limits.expect_observable && *limits.expect_observable != observable) {
        violations.push_back("declared limits give observable regime " +
                             std::string(to_string(observable)) + ", not the expected " +
                             std::string(to_string(*limits.expect_observable)));
    }
    if (limits.expect_chain && *limits.expect_chain != chain) {
        violations.push_back("declared limits give chain regime " + std::string(to_string(chain)) +
                             ", not the expected " + std::string(to_string(*limits.expect_chain)));
    }
    if (!violations.empty()) {
        std::ostringstream msg;
        msg << "inconsistent declared limits:";
        for (const auto& v : violations) msg << "\n  - " << v;
        throw ValidationError(msg.str());
    }
    return {observable, chain};
}

RegimeReport classify(const ParamFamily& family, ClassifyMode mode,
                      const std::optional<DeclaredLimits>& declared, bool with_ratio) {
    if (mode == ClassifyMode::declared_limits && !declared)
        throw ValidationError("declared-limits mode needs declared limits");
    RegimeReport report{};
    report.mode = mode;
    for (const auto& p : family.instances()) {
        report.samples.push_back(RegimeSample{p.total_balls(), p.heavy_count(), p.heavy_rate(),
                                              p.beta(), gamma(p), tilde_gamma(p), ell(p)});
    }
    const auto largest = family.at(family.sizes().back());
    report.predicted = predicted_times(largest);
    report.relaxation_time = largest.relaxation_time();

    if (mode == ClassifyMode::declared_limits) {
        const auto [observable, chain] = regimes_from_limits(*declared);
        report.gamma_inf = declared->gamma_inf;
        report.tilde_gamma_inf = declared->tilde_gamma_inf;
        report.ell = declared->ell;
        report.m_diverges = declared->m_diverges;
        report.observable_regime = observable;
        report.chain_regime = chain;
    } else {
        const auto& a = report.samples[report.samples.size() - 2];
        const auto& b = report.samples.back();
        report.gamma_inf = extrapolate_limit(a.gamma, b.gamma);
        report.tilde_gamma_inf = extrapolate_limit(a.tilde_gamma, b.tilde_gamma);
        const auto ell_growth = divergence(a.ell, b.ell);
        if (ell_growth) report.ell = *ell_growth ? kInf : b.ell;
        report.m_diverges = divergence(static_cast<double>(a.heavy_count),
                                       static_cast<double>(b.heavy_count));

        report.observable_regime = Regime::Undetermined;
        if (report.gamma_inf) {
            if (*report.gamma_inf < 0.0) {
                report.observable_regime = Regime::Insensitivity;
            } else if (report.ell) {
                report.observable_regime =
                    std::isinf(*report.ell) ? Regime::DelayedCutoff : Regime::NoCutoff;
            }
        }
        report.chain_regime = Regime::Undetermined;
        if (report.tilde_gamma_inf) {
            if (*report.tilde_gamma_inf < 0.0) {
                report.chain_regime = Regime::Insensitivity;
            } else if (report.m_diverges) {
                report.chain_regime = *report.m_diverges ? Regime::DelayedCutoff : Regime::NoCutoff;
            }
        }
    }
    if (with_ratio) report.product_condition_ratio = product_condition_ratio(largest);
    return report;
}

MixingTimeResult mixing_time(const ModelParams& params, double epsilon, Target target,
                             double t_hint) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
    const double t_rel = params.relaxation_time();
    const auto times = predicted_times(params);
    const double limit = 100.0 * std::max({times.t_regular, times.t_heavy, t_rel});
    const double hint = t_hint > 0.0 ? t_hint : default_hint(params, target);

    MixingTimeResult out{epsilon, 0.0, 0.0, 0.0, 0.0, 0.0, target, 0};
    auto eval = [&](double t) {
        ++out.evaluations;
        return distance(params, t, target);
    };

    double lo = 0.0;
    double value_lo = eval(0.0);
    if (value_lo <= epsilon) {
        out.value_lo = out.value_hi = value_lo;
        return out;
    }
    // Coarse scan: hint/8 steps up to 2 hint, then geometric growth.
    double hi = 0.0;
    double value_hi = value_lo;
    double step = hint / 8.0;
    for (int k = 1;; ++k) {
        hi = k <= 16 ? step * k : hi * 1.5;
        if (hi > limit) hi = limit;
        value_hi = eval(hi);
        if (value_hi <= epsilon) break;
        if (hi >= limit) {
            std::ostringstream msg;
            msg << to_string(target) << " distance stays above " << epsilon << " on [0, " << limit
                << "]";
            throw NoCrossingError(msg.str());
        }
        lo = hi;
        value_lo = value_hi;
    }
    const double resolution = 1e-3 * t_rel;
    while (hi - lo > resolution) {
        const double mid = 0.5 * (lo + hi);
        const double v = eval(mid);
        if (v <= epsilon) {
            hi = mid;
            value_hi = v;
        } else {
            lo = mid;
            value_lo = v;
        }
    }
    out.lo = lo;
    out.hi = hi;
    out.value_lo = value_lo;
    out.value_hi = value_hi;
    out.t_mix = 0.5 * (lo + hi);
    return out;
}

double product_condition_ratio(const ModelParams& params, double epsilon) {
    return mixing_time(params, epsilon, Target::chain).t_mix / params.relaxation_time();
}

TvCurve cutoff_profile(const ModelParams& params, double center_time, double window_unit,
                       const std::vector<double>& offsets, Target target) {
    if (!(window_unit > 0.0)) throw DomainError("window unit must be positive");
    TvCurve curve{target, center_time, window_unit, {}};
    for (double offset : offsets) {
        const double t = std::max(0.0, center_time + offset * window_unit);
        curve.points.push_back(TvPoint{offset, t, distance(params, t, target)});
    }
    return curve;
}

}  // namespace urn

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "urn/dist.hpp"
#include "urn/model.hpp"

namespace urn {

enum class Regime { Insensitivity, DelayedCutoff, NoCutoff, Undetermined };

std::string_view to_string(Regime regime);
std::optional<Regime> parse_regime(std::string_view text);

/// Which distance a curve measures: the ball count W_t or the full chain (R_t, H_t).
enum class Target { observable, chain };

std::string_view to_string(Target target);

/// Worst-case distance to equilibrium at time t for the chosen target.
double distance(const ModelParams& params, double t, Target target,
                InitialStrategy strategy = InitialStrategy::corners);

// Regime classification.

enum class ClassifyMode { declared_limits, extrapolate };

/// Limits of the family as N -> infinity, supplied by the caller.
struct DeclaredLimits {
    double gamma_inf;        ///< may be +-infinity
    double tilde_gamma_inf;  ///< in [-1, 1]
    double ell;              ///< limit of (2 beta - 1) log N; +infinity when it diverges
    bool m_diverges;
    std::optional<Regime> expect_observable;
    std::optional<Regime> expect_chain;
};

struct RegimeSample {
    std::int64_t total_balls;
    std::int64_t heavy_count;
    double alpha;
    double beta;
    double gamma;
    double tilde_gamma;
    double ell;
};

/// Relative agreement rule used when extrapolating limits from the two largest sizes.
inline constexpr double kLimitAgreement = 0.05;
/// Growth of (2 beta - 1) log N (or of m) above which it is declared divergent.
inline constexpr double kDivergenceGrowth = 0.20;

struct RegimeReport {
    ClassifyMode mode;
    std::vector<RegimeSample> samples;
    std::optional<double> gamma_inf;        ///< nullopt when undetermined
    std::optional<double> tilde_gamma_inf;
    std::optional<double> ell;              ///< +infinity when divergent, nullopt when undetermined
    std::optional<bool> m_diverges;
    Regime observable_regime;
    Regime chain_regime;
    PredictedTimes predicted;               ///< at the largest size
    double relaxation_time;                 ///< at the largest size
    std::optional<double> product_condition_ratio;
};

/// Labels a family by the observable trichotomy (sign of gamma, growth of
/// (2 beta - 1) log N) and the chain trichotomy (sign of tilde gamma, growth of m).
///
/// extrapolate: limits are read off the two largest sizes; a limit is accepted when
/// both values agree within 5% relative, taken as -inf/+inf when both share a sign
/// and move away from zero by more than that, and is otherwise undetermined.
/// declared_limits: the supplied limits are checked for the implications between
/// the two trichotomies; any violation raises ValidationError naming it.
///
/// When with_ratio is set, the product-condition ratio is computed at the largest size.
RegimeReport classify(const ParamFamily& family, ClassifyMode mode,
                      const std::optional<DeclaredLimits>& declared = std::nullopt,
                      bool with_ratio = false);

/// Derives the two labels from limits; throws ValidationError listing every violated
/// implication.
std::pair<Regime, Regime> regimes_from_limits(const DeclaredLimits& limits);

// Mixing times.

struct MixingTimeResult {
    double epsilon;
    double t_mix;      ///< midpoint of the bracket
    double lo;         ///< distance(lo) > epsilon
    double hi;         ///< distance(hi) <= epsilon
    double value_lo;
    double value_hi;
    Target target;
    std::int64_t evaluations;

    double bracket_width() const noexcept { return hi - lo; }
};

/// First time the worst-case distance drops to epsilon. A coarse grid seeded by
/// t_hint (predicted cutoff time when t_hint <= 0) locates the first crossing,
/// then bisection narrows it to 1e-3 t_rel. Throws NoCrossingError if the curve
/// stays above epsilon on [0, 100 max(t_R, t_H, t_rel)].
MixingTimeResult mixing_time(const ModelParams& params, double epsilon, Target target,
                             double t_hint = 0.0);

/// t_mix(chain, epsilon) / t_rel.
double product_condition_ratio(const ModelParams& params, double epsilon = 0.25);

struct TvPoint {
    double offset;
    double t;  ///< center + offset * unit, floored at 0
    double value;
};

struct TvCurve {
    Target target;
    double center;
    double unit;
    std::vector<TvPoint> points;
};

/// Distance sampled at center + offset * window_unit. Negative times are evaluated at 0.
TvCurve cutoff_profile(const ModelParams& params, double center_time, double window_unit,
                       const std::vector<double>& offsets, Target target = Target::observable);

}  // namespace urn

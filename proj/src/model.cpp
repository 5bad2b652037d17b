#include "urn/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>

#include "urn/error.hpp"

namespace urn {

namespace {

double compute_beta(std::int64_t total, std::int64_t heavy) {
    if (heavy == 0) return -std::numeric_limits<double>::infinity();
    if (total == 1) return 0.0;
    return std::log(static_cast<double>(heavy)) / std::log(static_cast<double>(total));
}

}  // namespace

ModelParams::ModelParams(std::int64_t total_balls, std::int64_t heavy_count, double heavy_rate)
    : total_(total_balls), heavy_(heavy_count), rate_(heavy_rate) {
    if (total_ < 1) throw DomainError("total_balls must be positive");
    if (heavy_ < 0 || heavy_ > total_)
        throw DomainError("heavy_count must lie in [0, total_balls]");
    if (!(rate_ >= kMinHeavyRate && rate_ <= 1.0))
        throw DomainError("heavy_rate must lie in [1e-12, 1]");
    beta_ = compute_beta(total_, heavy_);
}

bool ModelParams::out_of_paper_range() const noexcept {
    return heavy_ == 0 || heavy_ == total_ || rate_ >= 1.0;
}

void validate(const ModelParams& params, const InitialState& init) {
    if (init.regular_left < 0 || init.regular_left > params.regular_count() ||
        init.heavy_left < 0 || init.heavy_left > params.heavy_count()) {
        std::ostringstream msg;
        msg << "initial state (" << init.regular_left << "," << init.heavy_left
            << ") outside {0.." << params.regular_count() << "}x{0.." << params.heavy_count() << "}";
        throw DomainError(msg.str());
    }
}

std::vector<InitialState> corner_states(const ModelParams& params) {
    const auto n = params.regular_count();
    const auto m = params.heavy_count();
    std::vector<InitialState> out;
    for (InitialState s : {InitialState{0, 0}, InitialState{n, 0}, InitialState{0, m},
                           InitialState{n, m}}) {
        if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    }
    return out;
}

double gamma(const ModelParams& params) {
    return (2.0 * params.beta() - 1.0) / params.heavy_rate() - 1.0;
}

double tilde_gamma(const ModelParams& params) { return params.beta() - params.heavy_rate(); }

double ell(const ModelParams& params) {
    return (2.0 * params.beta() - 1.0) * std::log(static_cast<double>(params.total_balls()));
}

PredictedTimes predicted_times(double total_balls, double beta, double heavy_rate) {
    const double log_n = std::log(total_balls);
    const double g = (2.0 * beta - 1.0) / heavy_rate - 1.0;
    PredictedTimes out;
    out.t_regular = 0.5 * log_n;
    // No heavy balls: the heavy coordinate is trivially mixed.
    out.t_heavy = std::isfinite(beta) ? beta / (2.0 * heavy_rate) * log_n : 0.0;
    out.t_delayed = 0.5 * (1.0 + g) * log_n;
    return out;
}

PredictedTimes predicted_times(const ModelParams& params) {
    return predicted_times(static_cast<double>(params.total_balls()), params.beta(),
                           params.heavy_rate());
}

ParamFamily::ParamFamily(HeavyRule heavy, RateRule rate, std::vector<std::int64_t> sizes)
    : heavy_(heavy), rate_(rate), sizes_(std::move(sizes)) {
    if (sizes_.size() < 2) throw ValidationError("a family needs at least two sample sizes");
    for (std::size_t i = 1; i < sizes_.size(); ++i) {
        if (sizes_[i] <= sizes_[i - 1])
            throw ValidationError("family sample sizes must be strictly increasing");
    }
    for (auto n : sizes_) (void)at(n);
}

ModelParams ParamFamily::at(std::int64_t total_balls) const {
    if (total_balls < 2) throw DomainError("family sizes must be at least 2");
    const double n = static_cast<double>(total_balls);
    const double log_n = std::log(n);
    const std::int64_t m = std::visit(
        [&](const auto& rule) -> std::int64_t {
            using R = std::decay_t<decltype(rule)>;
            if constexpr (std::is_same_v<R, FixedHeavy>) {
                return rule.count;
            } else if constexpr (std::is_same_v<R, PowerHeavy>) {
                return std::llround(std::pow(n, rule.exponent));
            } else {
                return std::llround(rule.scale * std::sqrt(n) * std::exp(rule.ell / 2.0));
            }
        },
        heavy_);
    const double alpha = std::visit(
        [&](const auto& rule) -> double {
            using R = std::decay_t<decltype(rule)>;
            if constexpr (std::is_same_v<R, ConstantRate>) {
                return rule.value;
            } else {
                return rule.numerator / log_n;
            }
        },
        rate_);
    return ModelParams(total_balls, m, alpha);
}

std::vector<ModelParams> ParamFamily::instances() const {
    std::vector<ModelParams> out;
    out.reserve(sizes_.size());
    for (auto n : sizes_) out.push_back(at(n));
    return out;
}

}  // namespace urn

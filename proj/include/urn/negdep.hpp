#pragma once

#include <cstdint>
#include <vector>

#include "urn/model.hpp"

namespace urn {

// Negative dependence of the survival-indicator vector Z(t) obtained by placing
// the m heavy balls uniformly at random among N positions. Z is exchangeable,
// so every joint moment depends on a subset only through its size.

/// Guard on C(N, m) for the brute-force enumeration oracle.
inline constexpr std::int64_t kBruteForceLimit = 1'000'000;
/// Largest N for which the configuration law on {0,1}^N is enumerated.
inline constexpr std::int64_t kChiSquareMaxBalls = 10;

/// E[Z_i(t)] = (m/N) e^{-alpha t} + ((N-m)/N) e^{-t}.
double mean_Z(const ModelParams& params, double t);

/// E[prod_{i in A} Z_i(t)] for |A| = size, as the hypergeometric mixture
/// sum_a P(H = a) e^{-alpha t a} e^{-t (size - a)}, H ~ Hypergeom(N, m, size).
double joint_moment(const ModelParams& params, double t, std::int64_t size);

/// Same moment by enumerating all C(N, m) heavy placements for the subset {0..size-1}.
double brute_force_joint_moment(const ModelParams& params, double t, std::int64_t size);

/// Brute force over an explicit subset of positions (indices in [0, N)).
double brute_force_joint_moment(const ModelParams& params, double t,
                                const std::vector<std::int64_t>& subset);

struct FactorialMoments {
    double binomial;        ///< E[(B)_k], B ~ Bin(size, m/N)
    double hypergeometric;  ///< E[(H)_k], H ~ Hypergeom(N, m, size)
};

FactorialMoments factorial_moment_comparison(std::int64_t size, std::int64_t k,
                                             const ModelParams& params);

struct MgfPair {
    double binomial;        ///< E[u^B]
    double hypergeometric;  ///< E[u^H]
};

/// Probability generating functions at u >= 1 by direct summation.
MgfPair mgf_compare(double u, std::int64_t size, const ModelParams& params);

struct NegDepRow {
    std::int64_t size;
    double joint_moment;
    double product_moment;
    double slack;  ///< product_moment - joint_moment
    /// Brute-force value when C(N, m) is under the guard; NaN otherwise.
    double brute_force;
};

struct NegDepReport {
    ModelParams params;
    double t;
    std::vector<NegDepRow> rows;
    double min_slack;
    bool brute_force_checked;
    bool pass;  ///< min_slack >= -1e-12 and brute force agrees within 1e-12
};

inline constexpr double kNegDepTolerance = 1e-12;

NegDepReport verify_negative_dependence(const ModelParams& params, double t, std::int64_t max_size);

/// Law of the coupled configuration X(t) in {0,1}^N started from `init`, indexed
/// by bitmask (bit i set = ball i on the left). Enumerates heavy placements and
/// initial patterns jointly; N <= kChiSquareMaxBalls.
std::vector<double> configuration_law(const ModelParams& params, const InitialState& init, double t);

/// ||mu_t / pi - 1||^2 in L2(pi) for the configuration law against uniform pi.
double exact_chi_square(const ModelParams& params, const InitialState& init, double t);

/// prod_i (1 + E[Z_i]^2) - 1, the negative-dependence bound on exact_chi_square.
double chi_square_bound(const ModelParams& params, double t);

}  // namespace urn

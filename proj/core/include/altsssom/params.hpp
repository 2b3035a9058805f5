#pragma once

#include <cstddef>
#include <string>

namespace altsssom {

/// Hyperparameters of the map. The first nine are swept; the last two are fixed numeric guards.
struct Params {
    double lp = 0.0015;           ///< lowest cluster percentage
    double beta = 0.925;          ///< decay rate of the distance moving averages
    std::size_t age_wins = 100;   ///< competitions between removal resets
    double e_b = 0.1005;          ///< winner learning rate
    double e_n = 0.0503505;       ///< neighbor learning rate
    double s = 0.055;             ///< slope of the relevance logistic
    double minwd = 0.25;          ///< connection threshold on relevance dissimilarity
    std::size_t epochs = 51;      ///< full randomized passes in the organization phase
    std::size_t n_max = 200;      ///< node cap

    double eps_act = 1e-7;        ///< activation denominator guard
    double var_floor = 1e-6;      ///< floor applied to the bias-corrected distance before relaxing

    bool operator==(const Params&) const = default;
};

/// Midpoints of the standard sweep ranges; age_wins midpoint scales with the number of patterns.
Params default_params(std::size_t n_patterns);

/// Throws ContractViolation naming the offending field.
void validate(const Params& p);

}  // namespace altsssom

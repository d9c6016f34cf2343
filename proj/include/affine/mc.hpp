#pragma once

// Monte Carlo pricing under the risk-neutral measure.
//
// Each path produces the pair (r_T, I) with I = int_t^T r_u du. Gaussian models
// (beta2 = 0) sample the pair exactly from its joint normal law; any affine
// model can use Euler-Maruyama with full truncation of the diffusion radicand.
// Randomness is keyed by (seed, path index), and the reduction runs over fixed
// blocks merged pairwise, so results are bit-identical for any thread count.

#include <cstdint>
#include <vector>

#include "affine/model.hpp"

namespace affine {

enum class Scheme { Exact, Euler };

struct MCConfig {
    std::size_t paths = 1'000'000;
    std::size_t steps = 500;  ///< Euler steps over the simulation horizon
    std::uint64_t seed = 42;
    Scheme scheme = Scheme::Exact;
    bool antithetic = true;
};

struct MCResult {
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t paths_used = 0;
};

struct RateSample {
    double rate = 0.0;      ///< r_T
    double integral = 0.0;  ///< int_t^T r_u du
};

/// Moments of the joint normal law of (r_T, I) for a Gaussian model.
struct GaussianTransition {
    double mean_rate = 0.0;
    double mean_integral = 0.0;
    double var_rate = 0.0;
    double var_integral = 0.0;
    double covariance = 0.0;
};

/// Throws InvalidInput for beta2 != 0 ("use euler scheme") or horizon < t.
GaussianTransition gaussian_transition(const ModelParams& params, const MarketState& state,
                                       double horizon);

/// Exact draw of (r_T, I) for path `path_index`; `negate` flips the normals
/// (the antithetic partner).
RateSample sample_rate_and_integral(const ModelParams& params, const MarketState& state,
                                    double horizon, std::uint64_t seed, std::uint64_t path_index,
                                    bool negate = false);

/// One Euler-Maruyama path with trapezoidal accumulation of I.
RateSample euler_path(const GenericAffine& params, const MarketState& state, double horizon,
                      std::size_t steps, std::uint64_t seed, std::uint64_t path_index,
                      bool negate = false);

/// Euler ensemble of config.paths paths; antithetic partners are adjacent.
std::vector<RateSample> euler_paths(const GenericAffine& params, const MarketState& state,
                                    double horizon, const MCConfig& config);

/// Throws InvalidInput when the configuration is unusable for this model.
void check_config(const MCConfig& config, const ModelParams& params);

/// Mean of exp(-I).
MCResult mc_bond_price(const ModelParams& params, const MarketState& state, double maturity,
                       const MCConfig& config);

/// Mean of exp(-I) max(B(r_T, T; S) - K, 0), or the put payoff.
MCResult mc_option_price(const ModelParams& params, const MarketState& state,
                         const OptionSpec& spec, const MCConfig& config);

struct ForwardMoments {
    MCResult mean_log;  ///< E^T[ln(F_T / F_t)]
    MCResult var_log;   ///< Var^T[ln(F_T / F_t)], delta-method standard error
    MCResult forward;   ///< E^T[F_T]
    double forward_today = 0.0;
};

/// T-forward measure moments of the forward bond price F = B(., S) / B(., T),
/// from risk-neutral paths weighted by exp(-I) / B(t, T).
ForwardMoments mc_forward_moments(const ModelParams& params, const MarketState& state,
                                  double expiry, double maturity, const MCConfig& config);

}  // namespace affine

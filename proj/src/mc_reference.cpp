#include "affine/mc_reference.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "affine/engine.hpp"

namespace affine::reference {

namespace {

RateSample draw(const ModelParams& params, const MarketState& state, double horizon,
                const MCConfig& config, std::uint64_t path, bool negate) {
    if (config.scheme == Scheme::Exact) {
        return sample_rate_and_integral(params, state, horizon, config.seed, path, negate);
    }
    return euler_path(to_generic(params), state, horizon, config.steps, config.seed, path, negate);
}

MCResult estimate(const ModelParams& params, const MarketState& state, double horizon,
                  const MCConfig& config, const std::function<double(const RateSample&)>& payoff) {
    std::vector<double> samples;
    std::size_t used = 0;
    if (config.antithetic) {
        const std::size_t pairs = (config.paths + 1) / 2;
        samples.reserve(pairs);
        for (std::size_t i = 0; i < pairs; ++i) {
            const double up = payoff(draw(params, state, horizon, config, i, false));
            const double down = payoff(draw(params, state, horizon, config, i, true));
            samples.push_back(0.5 * (up + down));
        }
        used = 2 * pairs;
    } else {
        samples.reserve(config.paths);
        for (std::size_t i = 0; i < config.paths; ++i) {
            samples.push_back(payoff(draw(params, state, horizon, config, i, false)));
        }
        used = config.paths;
    }

    const auto n = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= n;
    double ss = 0.0;
    for (double s : samples) ss += (s - mean) * (s - mean);
    return {mean, std::sqrt(ss / (n - 1.0) / n), used};
}

}  // namespace

MCResult mc_bond_price(const ModelParams& params, const MarketState& state, double maturity,
                       const MCConfig& config) {
    check_config(config, params);
    return estimate(params, state, maturity, config,
                    [](const RateSample& s) { return std::exp(-s.integral); });
}

MCResult mc_option_price(const ModelParams& params, const MarketState& state,
                         const OptionSpec& spec, const MCConfig& config) {
    check_config(config, params);
    require_valid(validate(spec, state));
    const auto ab = affine_pair(params, spec.bond_maturity - spec.expiry);
    const bool call = spec.kind == OptionKind::Call;
    return estimate(params, state, spec.expiry, config, [&](const RateSample& s) {
        const double bond = std::exp(-ab.a - s.rate * ab.b);
        const double intrinsic = call ? bond - spec.strike : spec.strike - bond;
        return std::exp(-s.integral) * std::max(intrinsic, 0.0);
    });
}

}  // namespace affine::reference

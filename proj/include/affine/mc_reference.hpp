#pragma once

// Straight-line serial Monte Carlo estimators. They store every sample and use
// a two-pass mean/variance, and exist to check and benchmark the parallel kernels
// in mc.hpp, which must agree with them to summation round-off.

#include "affine/mc.hpp"

namespace affine::reference {

MCResult mc_bond_price(const ModelParams& params, const MarketState& state, double maturity,
                       const MCConfig& config);

MCResult mc_option_price(const ModelParams& params, const MarketState& state,
                         const OptionSpec& spec, const MCConfig& config);

}  // namespace affine::reference

#pragma once

// Finite-difference solver for the pricing equation
//
//   V_t + (alpha1 - alpha2 r) V_r + (beta1 + beta2 r) V_rr / 2 - r V = 0,
//   V(r, T) = H(r),
//
// on a truncated rate interval with zero-gamma boundaries. Theta-scheme in time
// (Crank-Nicolson by default, started with fully implicit Rannacher steps) and
// centred differences in space.

#include <cstddef>
#include <functional>
#include <ostream>
#include <span>
#include <vector>

#include "affine/engine.hpp"
#include "affine/model.hpp"

namespace affine {

struct PDEGrid {
    double r_min = -0.5;
    double r_max = 0.5;
    std::size_t n_r = 801;  ///< odd, at least 3
    std::size_t n_t = 2000;
    double theta = 0.5;     ///< 0.5 Crank-Nicolson, 1 fully implicit
    std::size_t rannacher_steps = 2;
};

void check_grid(const PDEGrid& grid);

/// Rate interval covering 8 standard deviations of r over [t, horizon] around
/// both the current rate and its expected terminal value. For beta2 > 0 the
/// lower end is clipped at -beta1 / beta2.
PDEGrid default_pde_grid(const ModelParams& params, const MarketState& state, double horizon,
                         std::size_t n_r = 801, std::size_t n_t = 2000);

/// Value slices V(r_i, t_j); slice 0 is the valuation time, the last is expiry.
struct ValueSurface {
    std::vector<double> rates;
    std::vector<double> times;
    std::vector<double> values;  ///< times.size() x rates.size(), row-major

    std::span<const double> slice(std::size_t j) const {
        return {values.data() + j * rates.size(), rates.size()};
    }

    /// Cubic interpolation of the first slice. Throws outside the rate grid.
    double value_at(double r) const;
};

using TerminalPayoff = std::function<double(double)>;

/// keep_every = 0 stores only the two end slices; k > 0 also keeps every k-th step.
ValueSurface solve_fk(const GenericAffine& params, const TerminalPayoff& payoff, double t,
                      double expiry, const PDEGrid& grid, std::size_t keep_every = 0);

/// Uncertainty is the Richardson estimate from a run on a grid refined 2x in
/// both rate and time.
PriceEstimate pde_bond_price(const ModelParams& params, const MarketState& state, double maturity,
                             const PDEGrid& grid);
PriceEstimate pde_bond_price(const ModelParams& params, const MarketState& state, double maturity);

PriceEstimate pde_option_price(const ModelParams& params, const MarketState& state,
                               const OptionSpec& spec, const PDEGrid& grid);
PriceEstimate pde_option_price(const ModelParams& params, const MarketState& state,
                               const OptionSpec& spec);

/// Terminal payoff of the option as a function of r at expiry.
TerminalPayoff option_payoff(const ModelParams& params, const OptionSpec& spec);

/// CSV with header "t,r,V", one row per stored node.
void write_surface_csv(std::ostream& out, const ValueSurface& surface);

}  // namespace affine

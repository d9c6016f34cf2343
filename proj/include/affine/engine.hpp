#pragma once

// Numeric bond pricing for any one-factor affine model.
//
// b solves the Riccati equation b' = 1 - alpha2 b - beta2 b^2 / 2, b(0) = 0, and
// a(tau) = alpha1 int_0^tau b - beta1/2 int_0^tau b^2. Both are tabulated on a
// uniform tenor grid and interpolated with local cubics in between.

#include <span>
#include <vector>

#include "affine/closed_form.hpp"
#include "affine/model.hpp"

namespace affine {

inline constexpr double kDefaultRiccatiStep = 1e-3;

struct PriceEstimate {
    double value = 0.0;
    double uncertainty = 0.0;  ///< one-sigma error estimate, 0 for analytic values
};

class AffineCoefficients {
public:
    AffineCoefficients() = default;

    double horizon() const noexcept { return grid_.empty() ? 0.0 : grid_.back(); }
    double step() const noexcept { return step_; }
    std::size_t size() const noexcept { return grid_.size(); }
    bool has_a() const noexcept { return !a_.empty(); }

    std::span<const double> grid() const noexcept { return grid_; }
    std::span<const double> b_values() const noexcept { return b_; }
    std::span<const double> a_values() const noexcept { return a_; }

    /// Cubic interpolation on the grid. Throws InvalidInput outside [0, horizon].
    double b(double tau) const;
    double a(double tau) const;

    /// Richardson estimates (step h against 2h) of the sup-norm error in a and b.
    double a_error() const noexcept { return a_error_; }
    double b_error() const noexcept { return b_error_; }

private:
    friend AffineCoefficients solve_b(const GenericAffine&, double, double);
    friend AffineCoefficients compute_a(AffineCoefficients, double, double);
    friend AffineCoefficients solve_affine(const GenericAffine&, double, double);

    double interpolate(std::span<const double> values, double tau) const;

    std::vector<double> grid_;
    std::vector<double> b_;
    std::vector<double> a_;
    double step_ = 0.0;
    double a_error_ = 0.0;
    double b_error_ = 0.0;
};

/// Classical RK4 on a uniform grid with step horizon / ceil(horizon / step).
/// Throws NumericalError on non-finite values or when b leaves (0, y0], where y0
/// is the positive root of beta2 y^2 / 2 + alpha2 y - 1 = 0 (or 1/alpha2).
AffineCoefficients solve_b(const GenericAffine& params, double horizon, double step);

/// Fills a by cumulative composite Simpson quadrature over the b grid.
AffineCoefficients compute_a(AffineCoefficients coeffs, double alpha1, double beta1);

/// solve_b + compute_a, plus the step-doubling error estimates.
AffineCoefficients solve_affine(const GenericAffine& params, double horizon,
                                double step = kDefaultRiccatiStep);

/// Upper bound on b for alpha2 >= 0 models; +inf when the Riccati equation has
/// no positive equilibrium (alpha2 = beta2 = 0).
double riccati_equilibrium(const GenericAffine& params);

/// exp(-a(T - t) - r b(T - t)) from a solved table.
PriceEstimate bond_price_generic(const AffineCoefficients& coeffs, const MarketState& state,
                                 double maturity);

/// Closed form when the model has one, otherwise a fresh Riccati solve.
double bond_price(const ModelParams& params, const MarketState& state, double maturity);

/// (a, b) at one tenor, closed-form or numeric.
AffinePair affine_pair(const ModelParams& params, double tau);

/// y = -ln(price) / tenor.
double spot_rate(double bond_price, double tenor);

struct CurvePoint {
    double maturity = 0.0;
    double yield = 0.0;
};

/// Maturities must be sorted and strictly after state.t.
std::vector<CurvePoint> yield_curve(const ModelParams& params, const MarketState& state,
                                    std::span<const double> maturities);

/// -b(T - t) sqrt(beta1 + beta2 r); non-positive by construction.
double bond_volatility(const ModelParams& params, const MarketState& state, double maturity);

/// B(t, S) / B(t, T).
double forward_price(double bond_S, double bond_T);

/// B(t, S) - K B(t, T).
double forward_value(double bond_S, double bond_T, double delivery_price);

}  // namespace affine

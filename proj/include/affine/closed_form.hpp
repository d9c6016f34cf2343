#pragma once

// Analytic zero-coupon bond and European bond option prices for the Merton
// and Vasicek models.

#include <optional>

#include "affine/model.hpp"

namespace affine {

/// Exponent coefficients of B(t, T) = exp(-a(tau) - r b(tau)), tau = T - t.
struct AffinePair {
    double a = 0.0;
    double b = 0.0;
};

/// a = phi tau^2 / 2 - sigma^2 tau^3 / 6, b = tau.
AffinePair merton_ab(const Merton& m, double tau);

/// b = (1 - exp(-kappa tau)) / kappa,
/// a = (theta - sigma^2 / (2 kappa^2)) (tau - b) + sigma^2 b^2 / (4 kappa).
AffinePair vasicek_ab(const Vasicek& v, double tau);

/// Rewrites a Gaussian model (beta2 = 0) as Merton or Vasicek. Returns nullopt
/// for square-root diffusions and for alpha2 < 0, which have no closed form here.
std::optional<ModelParams> as_closed_form_model(const ModelParams& params);

/// Closed (a, b) for any model accepted by as_closed_form_model.
std::optional<AffinePair> closed_ab(const ModelParams& params, double tau);

/// Throws InvalidInput when the model has no closed form or T < t.
double bond_price_closed(const ModelParams& params, const MarketState& state, double maturity);

enum class VFormula {
    Derived,  ///< sqrt of the integrated squared forward volatility
    Printed,  ///< historical Vasicek variant, kept only for comparison runs
};

/// Standard deviation of ln(F(T)/F(t)) for the forward price F = B(., S)/B(., T).
///
///   Merton:  sigma (S - T) sqrt(T - t)
///   Vasicek: sigma/kappa (1 - e^{-kappa(S-T)}) sqrt((1 - e^{-2 kappa (T-t)}) / (2 kappa))
///
/// The Printed variant replaces the Vasicek value with
/// sigma/kappa^{3/2} (1 - e^{-kappa(S-t)}) sqrt(1 - e^{-2 kappa (T-t)}), which does
/// not follow from integrating sigma^2 (b(S-u) - b(T-u))^2 and is rejected by the
/// Monte Carlo and PDE checks. Merton is unaffected by the flag.
double integrated_vol(const ModelParams& params, double t, double expiry, double maturity,
                      VFormula formula = VFormula::Derived);

/// Standard normal distribution function.
double norm_cdf(double x);

struct LognormalParams {
    double m = 0.0;  ///< mean of ln Y
    double s = 0.0;  ///< standard deviation of ln Y
};

/// E[max(Y - K, 0)] for ln Y ~ N(m, s^2), K > 0.
double lognormal_call_expectation(const LognormalParams& p, double strike);

struct BlackInputs {
    double bond_S = 0.0;  ///< B(t, S)
    double bond_T = 0.0;  ///< B(t, T)
    double strike = 0.0;
    double v = 0.0;       ///< integrated forward volatility
};

/// B_S N(d1) - K B_T N(d2). With v = 0 this is the intrinsic max(B_S - K B_T, 0).
double black_bond_call(const BlackInputs& in);

double call_price(const ModelParams& params, const MarketState& state, const OptionSpec& spec,
                  VFormula formula = VFormula::Derived);

/// Put from parity: C + K B(t, T) - B(t, S).
double put_price(const ModelParams& params, const MarketState& state, const OptionSpec& spec,
                 VFormula formula = VFormula::Derived);

/// Dispatches on spec.kind.
double option_price(const ModelParams& params, const MarketState& state, const OptionSpec& spec,
                    VFormula formula = VFormula::Derived);

}  // namespace affine

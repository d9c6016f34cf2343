#include "affine/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace affine {

namespace {

// 1 - exp(-x) without cancellation for small x.
double one_minus_exp(double x) { return -std::expm1(-x); }

void require_tenor(double tau) {
    if (!(tau >= 0.0)) throw InvalidInput("tenor must be non-negative");
}

}  // namespace

AffinePair merton_ab(const Merton& m, double tau) {
    require_tenor(tau);
    const double tau2 = tau * tau;
    return {0.5 * m.phi * tau2 - m.sigma * m.sigma * tau2 * tau / 6.0, tau};
}

AffinePair vasicek_ab(const Vasicek& v, double tau) {
    require_tenor(tau);
    if (!(v.kappa > 0.0)) throw InvalidInput("kappa must be positive");
    const double k = v.kappa;
    const double b = one_minus_exp(k * tau) / k;
    const double s2 = v.sigma * v.sigma;
    const double a = (v.theta - s2 / (2.0 * k * k)) * (tau - b) + s2 / (4.0 * k) * b * b;
    return {a, b};
}

std::optional<ModelParams> as_closed_form_model(const ModelParams& params) {
    if (std::holds_alternative<Merton>(params) || std::holds_alternative<Vasicek>(params)) {
        return params;
    }
    const auto& g = std::get<GenericAffine>(params);
    if (g.beta2 != 0.0 || g.beta1 < 0.0 || g.alpha2 < 0.0) return std::nullopt;
    const double sigma = std::sqrt(g.beta1);
    if (g.alpha2 == 0.0) return Merton{g.alpha1, sigma};
    return Vasicek{g.alpha2, g.alpha1 / g.alpha2, sigma};
}

std::optional<AffinePair> closed_ab(const ModelParams& params, double tau) {
    const auto named = as_closed_form_model(params);
    if (!named) return std::nullopt;
    if (const auto* m = std::get_if<Merton>(&*named)) return merton_ab(*m, tau);
    return vasicek_ab(std::get<Vasicek>(*named), tau);
}

double bond_price_closed(const ModelParams& params, const MarketState& state, double maturity) {
    const double tau = maturity - state.t;
    if (!(tau >= 0.0)) throw InvalidInput("maturity must not precede valuation time");
    if (tau == 0.0) return 1.0;
    const auto ab = closed_ab(params, tau);
    if (!ab) throw InvalidInput("no closed-form bond price for a square-root diffusion");
    return std::exp(-ab->a - state.r * ab->b);
}

double integrated_vol(const ModelParams& params, double t, double expiry, double maturity,
                      VFormula formula) {
    if (!(t <= expiry)) throw InvalidInput("option expiry must not precede valuation time");
    if (!(expiry <= maturity)) throw InvalidInput("bond maturity must not precede option expiry");
    const auto named = as_closed_form_model(params);
    if (!named) throw InvalidInput("no closed-form forward volatility for a square-root diffusion");

    if (const auto* m = std::get_if<Merton>(&*named)) {
        return std::abs(m->sigma) * (maturity - expiry) * std::sqrt(expiry - t);
    }
    const auto& v = std::get<Vasicek>(*named);
    const double k = v.kappa;
    const double sigma = std::abs(v.sigma);
    if (formula == VFormula::Printed) {
        return sigma / std::pow(k, 1.5) * one_minus_exp(k * (maturity - t)) *
               std::sqrt(one_minus_exp(2.0 * k * (expiry - t)));
    }
    return sigma / k * one_minus_exp(k * (maturity - expiry)) *
           std::sqrt(one_minus_exp(2.0 * k * (expiry - t)) / (2.0 * k));
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double lognormal_call_expectation(const LognormalParams& p, double strike) {
    if (!(strike > 0.0)) throw InvalidInput("strike must be positive");
    if (!(p.s >= 0.0)) throw InvalidInput("lognormal s must be non-negative");
    if (p.s == 0.0) return std::max(std::exp(p.m) - strike, 0.0);
    const double d = (p.m - std::log(strike)) / p.s;
    return std::exp(p.m + 0.5 * p.s * p.s) * norm_cdf(d + p.s) - strike * norm_cdf(d);
}

double black_bond_call(const BlackInputs& in) {
    if (!(in.bond_S > 0.0) || !(in.bond_T > 0.0)) throw InvalidInput("bond prices must be positive");
    if (!(in.strike > 0.0)) throw InvalidInput("strike must be positive");
    if (!(in.v >= 0.0)) throw InvalidInput("integrated volatility must be non-negative");
    if (in.v == 0.0) return std::max(in.bond_S - in.strike * in.bond_T, 0.0);
    const double log_moneyness = std::log(in.bond_S) - std::log(in.bond_T) - std::log(in.strike);
    const double d1 = log_moneyness / in.v + 0.5 * in.v;
    const double d2 = d1 - in.v;
    return in.bond_S * norm_cdf(d1) - in.strike * in.bond_T * norm_cdf(d2);
}

double call_price(const ModelParams& params, const MarketState& state, const OptionSpec& spec,
                  VFormula formula) {
    require_valid(validate(spec, state));
    if (!as_closed_form_model(params)) {
        throw InvalidInput("no closed-form option price for a square-root diffusion");
    }
    const double bond_T = bond_price_closed(params, state, spec.expiry);
    const double bond_S = bond_price_closed(params, state, spec.bond_maturity);
    const double v = integrated_vol(params, state.t, spec.expiry, spec.bond_maturity, formula);
    return black_bond_call({bond_S, bond_T, spec.strike, v});
}

double put_price(const ModelParams& params, const MarketState& state, const OptionSpec& spec,
                 VFormula formula) {
    const double call = call_price(params, state, spec, formula);
    const double bond_T = bond_price_closed(params, state, spec.expiry);
    const double bond_S = bond_price_closed(params, state, spec.bond_maturity);
    return call + spec.strike * bond_T - bond_S;
}

double option_price(const ModelParams& params, const MarketState& state, const OptionSpec& spec,
                    VFormula formula) {
    return spec.kind == OptionKind::Call ? call_price(params, state, spec, formula)
                                         : put_price(params, state, spec, formula);
}

}  // namespace affine

#include "affine/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace affine {

namespace {

double riccati_rhs(const GenericAffine& p, double b) {
    return 1.0 - p.alpha2 * b - 0.5 * p.beta2 * b * b;
}

// Running integral of uniformly sampled f: Simpson on even nodes, Simpson 3/8
// over the last three panels on odd nodes, a local cubic on the first panel.
std::vector<double> cumulative_simpson(std::span<const double> f, double h) {
    const std::size_t n = f.size() - 1;
    std::vector<double> out(f.size(), 0.0);
    if (n >= 3) {
        out[1] = h / 24.0 * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
    } else {
        out[1] = h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]);
    }
    for (std::size_t i = 2; i <= n; ++i) {
        if (i % 2 == 0) {
            out[i] = out[i - 2] + h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
        } else {
            out[i] = out[i - 3] + 3.0 * h / 8.0 * (f[i - 3] + 3.0 * f[i - 2] + 3.0 * f[i - 1] + f[i]);
        }
    }
    return out;
}

}  // namespace

double riccati_equilibrium(const GenericAffine& params) {
    if (params.beta2 > 0.0) {
        return 2.0 / (params.alpha2 + std::sqrt(params.alpha2 * params.alpha2 + 2.0 * params.beta2));
    }
    if (params.alpha2 > 0.0) return 1.0 / params.alpha2;
    return std::numeric_limits<double>::infinity();
}

double AffineCoefficients::interpolate(std::span<const double> values, double tau) const {
    if (values.empty()) throw InvalidInput("coefficient table is empty");
    const double H = horizon();
    const double slack = 1e-12 * std::max(1.0, H);
    if (!(tau >= 0.0) || tau > H + slack) {
        throw InvalidInput("tenor outside the solved horizon (no extrapolation)");
    }
    const std::size_t n = values.size() - 1;
    if (tau >= H) return values[n];

    const double x = tau / step_;
    const auto cell = std::min(static_cast<std::size_t>(x), n - 1);
    if (x == static_cast<double>(cell)) return values[cell];

    std::size_t first = cell >= 1 ? cell - 1 : 0;
    const std::size_t count = std::min<std::size_t>(4, n + 1);
    first = std::min(first, n + 1 - count);

    double sum = 0.0;
    for (std::size_t i = first; i < first + count; ++i) {
        double w = 1.0;
        for (std::size_t j = first; j < first + count; ++j) {
            if (j == i) continue;
            w *= (x - static_cast<double>(j)) / (static_cast<double>(i) - static_cast<double>(j));
        }
        sum += w * values[i];
    }
    return sum;
}

double AffineCoefficients::b(double tau) const { return interpolate(b_, tau); }

double AffineCoefficients::a(double tau) const {
    if (a_.empty()) throw InvalidInput("a has not been computed for this table");
    return interpolate(a_, tau);
}

AffineCoefficients solve_b(const GenericAffine& params, double horizon, double step) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InvalidInput("horizon must be positive");
    if (!(step > 0.0) || step > horizon) throw InvalidInput("step must lie in (0, horizon]");

    const auto n = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
    const double h = horizon / static_cast<double>(n);

    AffineCoefficients out;
    out.step_ = h;
    out.grid_.resize(n + 1);
    out.b_.resize(n + 1);
    out.b_[0] = 0.0;
    for (std::size_t i = 0; i <= n; ++i) out.grid_[i] = h * static_cast<double>(i);
    out.grid_[n] = horizon;

    const double bound = riccati_equilibrium(params);
    double b = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        const double k1 = riccati_rhs(params, b);
        const double k2 = riccati_rhs(params, b + 0.5 * h * k1);
        const double k3 = riccati_rhs(params, b + 0.5 * h * k2);
        const double k4 = riccati_rhs(params, b + h * k3);
        b += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!std::isfinite(b)) throw NumericalError("ODE blow-up in Riccati solve");
        if (!(b > 0.0) || b > bound + 1e-12) {
            throw NumericalError("Riccati solution left (0, equilibrium]");
        }
        out.b_[i] = b;
    }
    return out;
}

AffineCoefficients compute_a(AffineCoefficients coeffs, double alpha1, double beta1) {
    if (coeffs.b_.size() < 3) throw InvalidInput("Simpson quadrature needs at least 3 grid points");
    std::vector<double> b2(coeffs.b_.size());
    std::transform(coeffs.b_.begin(), coeffs.b_.end(), b2.begin(), [](double v) { return v * v; });
    const auto int_b = cumulative_simpson(coeffs.b_, coeffs.step_);
    const auto int_b2 = cumulative_simpson(b2, coeffs.step_);
    coeffs.a_.resize(coeffs.b_.size());
    for (std::size_t i = 0; i < coeffs.a_.size(); ++i) {
        coeffs.a_[i] = alpha1 * int_b[i] - 0.5 * beta1 * int_b2[i];
    }
    coeffs.a_[0] = 0.0;
    return coeffs;
}

AffineCoefficients solve_affine(const GenericAffine& params, double horizon, double step) {
    auto fine = compute_a(solve_b(params, horizon, step), params.alpha1, params.beta1);
    // The error estimate needs a coarse grid with at least 3 points; tables
    // too short for that keep a zero estimate.
    const double coarse_step = 2.0 * fine.step_;
    if (coarse_step <= horizon && std::ceil(horizon / coarse_step - 1e-9) >= 2.0) {
        const auto coarse =
            compute_a(solve_b(params, horizon, coarse_step), params.alpha1, params.beta1);
        fine.b_error_ = std::abs(fine.b_.back() - coarse.b_.back()) / 15.0;
        fine.a_error_ = std::abs(fine.a_.back() - coarse.a_.back()) / 15.0;
    }
    return fine;
}

PriceEstimate bond_price_generic(const AffineCoefficients& coeffs, const MarketState& state,
                                 double maturity) {
    const double tau = maturity - state.t;
    if (!(tau >= 0.0)) throw InvalidInput("maturity must not precede valuation time");
    if (tau == 0.0) return {1.0, 0.0};
    const double value = std::exp(-coeffs.a(tau) - state.r * coeffs.b(tau));
    return {value, value * (coeffs.a_error() + std::abs(state.r) * coeffs.b_error())};
}

AffinePair affine_pair(const ModelParams& params, double tau) {
    if (!(tau >= 0.0)) throw InvalidInput("tenor must be non-negative");
    if (auto ab = closed_ab(params, tau)) return *ab;
    if (tau == 0.0) return {0.0, 0.0};
    const auto coeffs = solve_affine(to_generic(params), tau, std::min(kDefaultRiccatiStep, tau / 2.0));
    return {coeffs.a_values().back(), coeffs.b_values().back()};
}

double bond_price(const ModelParams& params, const MarketState& state, double maturity) {
    const double tau = maturity - state.t;
    if (!(tau >= 0.0)) throw InvalidInput("maturity must not precede valuation time");
    if (tau == 0.0) return 1.0;
    const auto ab = affine_pair(params, tau);
    return std::exp(-ab.a - state.r * ab.b);
}

double spot_rate(double bond_price, double tenor) {
    if (tenor == 0.0) throw InvalidInput("zero tenor: use the short rate limit");
    if (!(tenor > 0.0)) throw InvalidInput("tenor must be positive");
    if (!(bond_price > 0.0)) throw InvalidInput("bond price must be positive");
    return -std::log(bond_price) / tenor;
}

std::vector<CurvePoint> yield_curve(const ModelParams& params, const MarketState& state,
                                    std::span<const double> maturities) {
    std::vector<CurvePoint> out;
    if (maturities.empty()) return out;
    for (std::size_t i = 0; i < maturities.size(); ++i) {
        if (!(maturities[i] > state.t)) throw InvalidInput("curve maturities must follow t");
        if (i > 0 && !(maturities[i] > maturities[i - 1])) {
            throw InvalidInput("curve maturities must be strictly increasing");
        }
    }
    out.reserve(maturities.size());
    if (as_closed_form_model(params)) {
        for (double T : maturities) {
            out.push_back({T, spot_rate(bond_price_closed(params, state, T), T - state.t)});
        }
        return out;
    }
    const double horizon = maturities.back() - state.t;
    const auto coeffs =
        solve_affine(to_generic(params), horizon, std::min(kDefaultRiccatiStep, horizon / 2.0));
    for (double T : maturities) {
        out.push_back({T, spot_rate(bond_price_generic(coeffs, state, T).value, T - state.t)});
    }
    return out;
}

double bond_volatility(const ModelParams& params, const MarketState& state, double maturity) {
    const auto g = to_generic(params);
    const double radicand = g.beta1 + g.beta2 * state.r;
    if (radicand < 0.0) throw InvalidInput("beta1 + beta2 * r is negative");
    const double tau = maturity - state.t;
    if (!(tau >= 0.0)) throw InvalidInput("maturity must not precede valuation time");
    if (tau == 0.0) return 0.0;
    return -affine_pair(params, tau).b * std::sqrt(radicand);
}

double forward_price(double bond_S, double bond_T) {
    if (bond_T == 0.0) throw InvalidInput("forward price undefined for a zero T-bond price");
    return bond_S / bond_T;
}

double forward_value(double bond_S, double bond_T, double delivery_price) {
    return bond_S - delivery_price * bond_T;
}

}  // namespace affine

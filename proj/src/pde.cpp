#include "affine/pde.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "affine/closed_form.hpp"
#include "affine/mc.hpp"

namespace affine {

namespace {

constexpr double kDomainWidthSd = 8.0;

struct Tridiagonal {
    std::vector<double> lower, diag, upper;

    explicit Tridiagonal(std::size_t n) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0) {}
};

// Thomas algorithm; rhs is overwritten with the solution.
void solve_tridiagonal(const Tridiagonal& m, std::vector<double>& rhs, std::vector<double>& scratch,
                       const PDEGrid& grid) {
    const std::size_t n = rhs.size();
    scratch.resize(n);
    double pivot = m.diag[0];
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) {
            pivot = m.diag[i] - m.lower[i] * scratch[i - 1];
            rhs[i] -= m.lower[i] * rhs[i - 1];
        }
        if (pivot == 0.0 || !std::isfinite(pivot)) {
            throw NumericalError(fmt::format(
                "tridiagonal solve failed at node {} (n_r={}, n_t={}, r in [{}, {}])", i, grid.n_r,
                grid.n_t, grid.r_min, grid.r_max));
        }
        scratch[i] = m.upper[i] / pivot;
        rhs[i] /= pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= scratch[i] * rhs[i + 1];
}

// Spatial operator L with L V = mu V_r + s V_rr / 2 - r V as tridiagonal rows.
Tridiagonal spatial_operator(const GenericAffine& p, std::span<const double> rates, double h) {
    const std::size_t n = rates.size();
    Tridiagonal op(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = rates[i];
        const double mu = p.alpha1 - p.alpha2 * r;
        if (i == 0 || i == n - 1) {
            // V_rr = 0 at the edges, first derivative taken one-sided inwards.
            if (i == 0) {
                op.diag[i] = -mu / h - r;
                op.upper[i] = mu / h;
            } else {
                op.lower[i] = -mu / h;
                op.diag[i] = mu / h - r;
            }
            continue;
        }
        const double s = std::max(p.beta1 + p.beta2 * r, 0.0);
        op.lower[i] = s / (2.0 * h * h) - mu / (2.0 * h);
        op.diag[i] = -s / (h * h) - r;
        op.upper[i] = s / (2.0 * h * h) + mu / (2.0 * h);
    }
    return op;
}

double cubic_at(std::span<const double> xs, std::span<const double> ys, double x) {
    const std::size_t n = xs.size();
    const double h = (xs.back() - xs.front()) / static_cast<double>(n - 1);
    const double pos = (x - xs.front()) / h;
    const auto cell = std::min(static_cast<std::size_t>(std::max(pos, 0.0)), n - 2);
    std::size_t first = cell >= 1 ? cell - 1 : 0;
    const std::size_t count = std::min<std::size_t>(4, n);
    first = std::min(first, n - count);
    double sum = 0.0;
    for (std::size_t i = first; i < first + count; ++i) {
        double w = 1.0;
        for (std::size_t j = first; j < first + count; ++j) {
            if (j != i) {
                w *= (pos - static_cast<double>(j)) /
                     (static_cast<double>(i) - static_cast<double>(j));
            }
        }
        sum += w * ys[i];
    }
    return sum;
}

PDEGrid refined(const PDEGrid& grid) {
    PDEGrid fine = grid;
    fine.n_r = 2 * grid.n_r - 1;
    fine.n_t = 2 * grid.n_t;
    return fine;
}

PriceEstimate richardson(const GenericAffine& generic, const TerminalPayoff& payoff,
                         const MarketState& state, double expiry, const PDEGrid& grid) {
    if (!(state.r >= grid.r_min && state.r <= grid.r_max)) {
        throw InvalidInput("short rate lies outside the PDE grid");
    }
    const double coarse = solve_fk(generic, payoff, state.t, expiry, grid).value_at(state.r);
    const double fine = solve_fk(generic, payoff, state.t, expiry, refined(grid)).value_at(state.r);
    return {coarse, std::abs(fine - coarse) * 4.0 / 3.0};
}

}  // namespace

void check_grid(const PDEGrid& grid) {
    if (!(grid.r_min < grid.r_max)) throw InvalidInput("PDE grid needs r_min < r_max");
    if (grid.n_r < 3 || grid.n_r % 2 == 0) throw InvalidInput("PDE grid needs an odd n_r >= 3");
    if (grid.n_t < 1) throw InvalidInput("PDE grid needs n_t >= 1");
    if (!(grid.theta >= 0.0 && grid.theta <= 1.0)) throw InvalidInput("theta must lie in [0, 1]");
}

PDEGrid default_pde_grid(const ModelParams& params, const MarketState& state, double horizon,
                         std::size_t n_r, std::size_t n_t) {
    const double tau = std::max(horizon - state.t, 0.0);
    const auto g = to_generic(params);
    double mean = state.r;
    double sd = 0.0;
    if (g.beta2 == 0.0 && as_closed_form_model(params)) {
        const auto tr = gaussian_transition(params, state, state.t + tau);
        mean = tr.mean_rate;
        sd = std::sqrt(tr.var_rate);
    } else {
        if (g.alpha2 > 0.0) {
            mean = state.r * std::exp(-g.alpha2 * tau) + g.alpha1 / g.alpha2 * -std::expm1(-g.alpha2 * tau);
        } else {
            mean = state.r + (g.alpha1 - g.alpha2 * state.r) * tau;
        }
        const double effective_tau = g.alpha2 > 0.0 ? std::min(tau, 1.0 / (2.0 * g.alpha2)) : tau;
        sd = std::sqrt(std::max(g.beta1 + g.beta2 * std::max({state.r, mean, 0.0}), 0.0) *
                       effective_tau);
    }
    sd = std::max(sd, 0.01);

    PDEGrid grid;
    grid.r_min = std::min(state.r, mean) - kDomainWidthSd * sd;
    grid.r_max = std::max(state.r, mean) + kDomainWidthSd * sd;
    if (g.beta2 > 0.0) grid.r_min = std::max(grid.r_min, -g.beta1 / g.beta2);
    grid.n_r = n_r;
    grid.n_t = n_t;
    return grid;
}

double ValueSurface::value_at(double r) const {
    if (!(r >= rates.front() && r <= rates.back())) {
        throw InvalidInput("rate outside the PDE grid");
    }
    return cubic_at(rates, slice(0), r);
}

ValueSurface solve_fk(const GenericAffine& params, const TerminalPayoff& payoff, double t,
                      double expiry, const PDEGrid& grid, std::size_t keep_every) {
    check_grid(grid);
    if (!(expiry >= t)) throw InvalidInput("expiry must not precede valuation time");

    const std::size_t n = grid.n_r;
    const double h = (grid.r_max - grid.r_min) / static_cast<double>(n - 1);
    std::vector<double> rates(n);
    for (std::size_t i = 0; i < n; ++i) rates[i] = grid.r_min + h * static_cast<double>(i);
    rates.back() = grid.r_max;

    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = payoff(rates[i]);

    // Slices are collected backwards in time and reversed at the end.
    std::vector<std::vector<double>> kept{v};
    std::vector<double> kept_times{expiry};

    const double dt = (expiry - t) / static_cast<double>(grid.n_t);
    if (dt > 0.0) {
        const auto op = spatial_operator(params, rates, h);
        Tridiagonal lhs(n);
        std::vector<double> rhs(n), scratch(n);
        double assembled_theta = -1.0;

        for (std::size_t step = 1; step <= grid.n_t; ++step) {
            const double theta = step <= grid.rannacher_steps ? 1.0 : grid.theta;
            if (theta != assembled_theta) {
                for (std::size_t i = 0; i < n; ++i) {
                    lhs.lower[i] = -theta * dt * op.lower[i];
                    lhs.diag[i] = 1.0 - theta * dt * op.diag[i];
                    lhs.upper[i] = -theta * dt * op.upper[i];
                }
                assembled_theta = theta;
            }
            const double explicit_weight = (1.0 - theta) * dt;
            for (std::size_t i = 0; i < n; ++i) {
                double lv = op.diag[i] * v[i];
                if (i > 0) lv += op.lower[i] * v[i - 1];
                if (i + 1 < n) lv += op.upper[i] * v[i + 1];
                rhs[i] = v[i] + explicit_weight * lv;
            }
            solve_tridiagonal(lhs, rhs, scratch, grid);
            v.swap(rhs);

            const bool last = step == grid.n_t;
            if (last || (keep_every > 0 && step % keep_every == 0)) {
                kept.push_back(v);
                kept_times.push_back(last ? t : expiry - dt * static_cast<double>(step));
            }
        }
    } else {
        kept.push_back(v);
        kept_times.push_back(t);
    }

    ValueSurface surface;
    surface.rates = std::move(rates);
    surface.times.assign(kept_times.rbegin(), kept_times.rend());
    surface.values.reserve(kept.size() * n);
    for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
        surface.values.insert(surface.values.end(), it->begin(), it->end());
    }
    return surface;
}

PriceEstimate pde_bond_price(const ModelParams& params, const MarketState& state, double maturity,
                             const PDEGrid& grid) {
    if (!(maturity >= state.t)) throw InvalidInput("maturity must not precede valuation time");
    if (maturity == state.t) return {1.0, 0.0};
    return richardson(to_generic(params), [](double) { return 1.0; }, state, maturity, grid);
}

PriceEstimate pde_bond_price(const ModelParams& params, const MarketState& state,
                             double maturity) {
    return pde_bond_price(params, state, maturity, default_pde_grid(params, state, maturity));
}

TerminalPayoff option_payoff(const ModelParams& params, const OptionSpec& spec) {
    const auto ab = affine_pair(params, spec.bond_maturity - spec.expiry);
    const double strike = spec.strike;
    if (spec.kind == OptionKind::Call) {
        return [ab, strike](double r) { return std::max(std::exp(-ab.a - r * ab.b) - strike, 0.0); };
    }
    return [ab, strike](double r) { return std::max(strike - std::exp(-ab.a - r * ab.b), 0.0); };
}

PriceEstimate pde_option_price(const ModelParams& params, const MarketState& state,
                               const OptionSpec& spec, const PDEGrid& grid) {
    require_valid(validate(spec, state));
    const auto payoff = option_payoff(params, spec);
    if (spec.expiry == state.t) return {payoff(state.r), 0.0};
    return richardson(to_generic(params), payoff, state, spec.expiry, grid);
}

PriceEstimate pde_option_price(const ModelParams& params, const MarketState& state,
                               const OptionSpec& spec) {
    return pde_option_price(params, state, spec, default_pde_grid(params, state, spec.expiry));
}

void write_surface_csv(std::ostream& out, const ValueSurface& surface) {
    out << "t,r,V\n";
    for (std::size_t j = 0; j < surface.times.size(); ++j) {
        const auto row = surface.slice(j);
        for (std::size_t i = 0; i < surface.rates.size(); ++i) {
            out << fmt::format("{:.10g},{:.10g},{:.15g}\n", surface.times[j], surface.rates[i], row[i]);
        }
    }
}

}  // namespace affine

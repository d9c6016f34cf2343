#include "affine/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "affine/engine.hpp"
#include "affine/mc.hpp"
#include "affine/pde.hpp"

namespace affine {

namespace {

constexpr double kEngineTolerance = 1e-8;
constexpr double kPdeTolerance = 1e-4;
constexpr double kMcSigmas = 3.0;
constexpr double kParityTolerance = 1e-12;

struct BondPoint {
    const char* label;
    ModelParams model;
    MarketState state;
    double maturity;
};

struct Checks {
    std::vector<CheckResult> results;

    void absolute(std::string name, double error, double tolerance) {
        results.push_back({std::move(name), error, tolerance, error < tolerance});
    }

    void statistical(std::string name, double estimate, double expected, double std_error) {
        const double z = std_error > 0.0 ? std::abs(estimate - expected) / std_error
                                         : (estimate == expected ? 0.0 : std::numeric_limits<double>::infinity());
        results.push_back({std::move(name), z, kMcSigmas, z <= kMcSigmas});
    }
};

}  // namespace

std::vector<CheckResult> run_validation(const ValidationOptions& options) {
    const bool full = options.budget == Budget::Full;
    MCConfig mc;
    mc.paths = full ? 1'000'000 : 100'000;
    mc.seed = options.seed;
    const std::size_t n_r = full ? 801 : 401;
    const std::size_t n_t = full ? 2000 : 1000;

    Checks checks;

    const std::vector<BondPoint> bonds{
        {"merton", Merton{0.02, 0.03}, {0.0, 0.05}, 5.0},
        {"vasicek", Vasicek{0.4, 0.05, 0.03}, {0.0, 0.03}, 5.0},
    };

    for (const auto& p : bonds) {
        const auto coeffs = solve_affine(to_generic(p.model), 30.0);
        double worst = 0.0;
        for (double tau : {0.5, 1.0, 2.0, 5.0, 10.0, 30.0}) {
            const double closed = bond_price_closed(p.model, p.state, p.state.t + tau);
            const double numeric = bond_price_generic(coeffs, p.state, p.state.t + tau).value;
            worst = std::max(worst, std::abs(closed - numeric));
        }
        checks.absolute(fmt::format("bond {} engine vs closed", p.label), worst, kEngineTolerance);
    }

    for (const auto& p : bonds) {
        const double closed = bond_price_closed(p.model, p.state, p.maturity);
        const auto mc_bond = mc_bond_price(p.model, p.state, p.maturity, mc);
        checks.statistical(fmt::format("bond {} MC vs closed", p.label), mc_bond.estimate, closed,
                           mc_bond.std_error);
        const auto grid = default_pde_grid(p.model, p.state, p.maturity, n_r, n_t);
        checks.absolute(fmt::format("bond {} PDE vs closed", p.label),
                        std::abs(pde_bond_price(p.model, p.state, p.maturity, grid).value - closed),
                        kPdeTolerance);
    }

    {
        const ModelParams square_root = GenericAffine{0.02, 0.4, 0.0009, 0.05};
        const MarketState state{0.0, 0.03};
        const double engine = bond_price(square_root, state, 5.0);
        const auto grid = default_pde_grid(square_root, state, 5.0, n_r, n_t);
        checks.absolute("bond beta2>0 PDE vs engine",
                        std::abs(pde_bond_price(square_root, state, 5.0, grid).value - engine),
                        kPdeTolerance);
    }

    // Option arbitration point.
    const MarketState origin{0.0, 0.0};
    const OptionSpec call{OptionKind::Call, 0.8, 3.0, 5.0};
    const std::vector<std::pair<const char*, ModelParams>> option_models{
        {"merton", Merton{0.4 * 0.02, 0.03}},
        {"vasicek", Vasicek{0.4, 0.02, 0.03}},
    };
    for (const auto& [label, model] : option_models) {
        const double closed = call_price(model, origin, call, options.formula);
        const auto mc_call = mc_option_price(model, origin, call, mc);
        checks.statistical(fmt::format("call {} MC vs closed", label), mc_call.estimate, closed,
                           mc_call.std_error);
        const auto grid = default_pde_grid(model, origin, call.expiry, n_r, n_t);
        checks.absolute(fmt::format("call {} PDE vs closed", label),
                        std::abs(pde_option_price(model, origin, call, grid).value - closed),
                        kPdeTolerance);
    }

    {
        double worst = 0.0;
        for (const auto& [label, model] : option_models) {
            for (double strike : {0.5, 0.7, 0.8, 0.9, 1.1}) {
                for (double expiry : {0.5, 1.0, 2.0, 3.0, 5.0}) {
                    const OptionSpec spec{OptionKind::Call, strike, expiry, 5.0};
                    const double c = call_price(model, origin, spec, options.formula);
                    const double p = put_price(model, origin, spec, options.formula);
                    const double bs = bond_price_closed(model, origin, spec.bond_maturity);
                    const double bt = bond_price_closed(model, origin, spec.expiry);
                    worst = std::max(worst, std::abs(c - p - (bs - strike * bt)));
                }
            }
        }
        checks.absolute("put-call parity sweep", worst, kParityTolerance);
    }

    for (const auto& [label, model] : option_models) {
        const auto moments = mc_forward_moments(model, origin, 3.0, 5.0, mc);
        const double v = integrated_vol(model, 0.0, 3.0, 5.0, options.formula);
        checks.statistical(fmt::format("forward {} log variance = v^2", label),
                           moments.var_log.estimate, v * v, moments.var_log.std_error);
        checks.statistical(fmt::format("forward {} log mean = -v^2/2", label),
                           moments.mean_log.estimate, -0.5 * v * v, moments.mean_log.std_error);
        checks.statistical(fmt::format("forward {} martingale", label), moments.forward.estimate,
                           moments.forward_today, moments.forward.std_error);
    }

    return checks.results;
}

bool all_passed(const std::vector<CheckResult>& results) {
    return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
}

void print_report(std::ostream& out, const std::vector<CheckResult>& results) {
    std::size_t width = 5;
    for (const auto& r : results) width = std::max(width, r.name.size());
    out << fmt::format("{:<{}}  {:>12}  {:>12}  {}\n", "check", width, "measured", "tolerance",
                       "result");
    for (const auto& r : results) {
        out << fmt::format("{:<{}}  {:>12.4e}  {:>12.4e}  {}\n", r.name, width, r.measured,
                           r.tolerance, r.pass ? "PASS" : "FAIL");
    }
    const auto passed = std::count_if(results.begin(), results.end(), [](const auto& r) { return r.pass; });
    out << fmt::format("{}/{} checks passed\n", passed, results.size());
}

}  // namespace affine

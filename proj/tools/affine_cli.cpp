// affine-cli: bond and bond-option pricing under one-factor affine short-rate
// models, with Monte Carlo and PDE cross-checks.
//
// Exit codes: 0 success, 1 validation failure, 2 usage or input error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "affine/closed_form.hpp"
#include "affine/engine.hpp"
#include "affine/figures.hpp"
#include "affine/json.hpp"
#include "affine/mc.hpp"
#include "affine/pde.hpp"
#include "affine/validation.hpp"

namespace {

using namespace affine;

constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;

struct Globals {
    std::string model;
    std::string state;
    std::optional<double> t;
    std::optional<double> r;
    std::uint64_t seed = 42;
    std::string out;
    std::string v_formula = "derived";
};

std::string read_text_or_file(const std::string& arg) {
    const auto first = arg.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && arg[first] == '{') return arg;
    std::ifstream in(arg);
    if (!in) throw InvalidInput("cannot read JSON file '" + arg + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

ModelParams load_model(const Globals& g) {
    if (g.model.empty()) throw InvalidInput("--model is required");
    auto params = model_from_json(parse_json_text(read_text_or_file(g.model)));
    require_valid(validate(params));
    return params;
}

MarketState load_state(const Globals& g, const ModelParams& params) {
    MarketState state;
    if (!g.state.empty()) state = state_from_json(parse_json_text(read_text_or_file(g.state)));
    if (g.t) state.t = *g.t;
    if (g.r) state.r = *g.r;
    require_valid(validate(params, state));
    return state;
}

VFormula parse_formula(const std::string& s) {
    if (s == "derived") return VFormula::Derived;
    if (s == "printed") return VFormula::Printed;
    throw InvalidInput("--v-formula must be 'derived' or 'printed'");
}

void warn_if_printed(VFormula formula) {
    if (formula == VFormula::Printed) {
        std::cerr << "WARNING: --v-formula printed uses the historical Vasicek forward volatility,\n"
                     "WARNING: which disagrees with Monte Carlo and PDE prices. Comparison use only.\n";
    }
}

// Writes to --out when given, stdout otherwise.
template <class Writer>
void emit(const Globals& g, Writer&& writer) {
    if (g.out.empty()) {
        writer(std::cout);
        return;
    }
    std::ofstream file(g.out, std::ios::binary);
    if (!file) throw InvalidInput("cannot open output file '" + g.out + "'");
    writer(file);
    if (!file) throw InvalidInput("failed writing '" + g.out + "'");
}

std::string num(double x) { return fmt::format("{:.12g}", x); }

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" ", used) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InvalidInput("bad number in list: '" + item + "'");
        }
    }
    return values;
}

struct OptionFlags {
    std::string kind = "call";
    double strike = 0.0;
    double expiry = 0.0;
    double bond_maturity = 0.0;

    OptionSpec spec() const {
        if (kind != "call" && kind != "put") throw InvalidInput("--kind must be call or put");
        return {kind == "call" ? OptionKind::Call : OptionKind::Put, strike, expiry, bond_maturity};
    }
};

void add_option_flags(CLI::App* cmd, OptionFlags& f, bool required) {
    cmd->add_option("--strike,-K", f.strike, "exercise price K")->required(required);
    cmd->add_option("--expiry", f.expiry, "option expiry T (years)")->required(required);
    cmd->add_option("--bond-maturity", f.bond_maturity, "underlying bond maturity S (years)")
        ->required(required);
    cmd->add_option("--kind", f.kind, "call or put")->capture_default_str();
}

int cmd_bond(const Globals& g, double maturity) {
    const auto params = load_model(g);
    const auto state = load_state(g, params);
    const double price = bond_price(params, state, maturity);
    if (maturity == state.t) {
        std::cout << "price=1.0, yield undefined at zero tenor\n";
    } else {
        std::cout << "price=" << num(price) << ", yield=" << num(spot_rate(price, maturity - state.t))
                  << '\n';
    }
    return 0;
}

int cmd_option(const Globals& g, const OptionFlags& flags) {
    const auto params = load_model(g);
    const auto state = load_state(g, params);
    const auto spec = flags.spec();
    const auto formula = parse_formula(g.v_formula);
    warn_if_printed(formula);
    const double call = call_price(params, state, spec, formula);
    const double put = put_price(params, state, spec, formula);
    const double bond_S = bond_price_closed(params, state, spec.bond_maturity);
    const double bond_T = bond_price_closed(params, state, spec.expiry);
    const double residual = std::abs(call - put - forward_value(bond_S, bond_T, spec.strike));
    std::cout << "call=" << num(call) << ", put=" << num(put)
              << ", parity_residual=" << fmt::format("{:.3e}", residual) << '\n';
    return 0;
}

int cmd_curve(const Globals& g, const std::string& maturities) {
    const auto params = load_model(g);
    const auto state = load_state(g, params);
    const auto points = yield_curve(params, state, parse_list(maturities));
    emit(g, [&](std::ostream& out) {
        out << "T,yield\n";
        for (const auto& p : points) out << num(p.maturity) << ',' << num(p.yield) << '\n';
    });
    return 0;
}

FigureSpec figure_spec(const Globals& g, const std::string& thetas, const std::string& expiries) {
    auto spec = default_figure_spec();
    if (!thetas.empty()) spec.theta_grid = parse_list(thetas);
    if (!expiries.empty()) spec.expiry_grid = parse_list(expiries);
    spec.formula = parse_formula(g.v_formula);
    warn_if_printed(spec.formula);
    return spec;
}

int cmd_mc(const Globals& g, const OptionFlags& flags, std::optional<double> maturity,
           MCConfig config, const std::string& scheme) {
    const auto params = load_model(g);
    const auto state = load_state(g, params);
    config.seed = g.seed;
    if (scheme == "euler") {
        config.scheme = Scheme::Euler;
    } else if (scheme != "exact") {
        throw InvalidInput("--scheme must be exact or euler");
    }
    MCResult result;
    if (maturity) {
        result = mc_bond_price(params, state, *maturity, config);
    } else {
        result = mc_option_price(params, state, flags.spec(), config);
    }
    std::cout << "estimate=" << num(result.estimate) << ", std_error=" << num(result.std_error)
              << ", paths=" << result.paths_used << '\n';
    return 0;
}

int cmd_pde_dump(const Globals& g, const OptionFlags& flags, std::optional<double> maturity,
                 std::size_t n_r, std::size_t n_t, std::size_t keep_every) {
    const auto params = load_model(g);
    const auto state = load_state(g, params);
    TerminalPayoff payoff;
    double expiry = 0.0;
    if (maturity) {
        payoff = [](double) { return 1.0; };
        expiry = *maturity;
    } else {
        const auto spec = flags.spec();
        require_valid(validate(spec, state));
        payoff = option_payoff(params, spec);
        expiry = spec.expiry;
    }
    const auto grid = default_pde_grid(params, state, expiry, n_r, n_t);
    const auto surface = solve_fk(to_generic(params), payoff, state.t, expiry, grid, keep_every);
    emit(g, [&](std::ostream& out) { write_surface_csv(out, surface); });
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Zero-coupon bond and bond option pricing under affine short-rate models"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--model", g.model, "model JSON (inline or file path)");
    app.add_option("--state", g.state, "market state JSON {\"t\":..,\"r\":..} (inline or file)");
    app.add_option("--t", g.t, "valuation time (overrides --state)");
    app.add_option("--r", g.r, "short rate (overrides --state)");
    app.add_option("--seed", g.seed, "seed for randomized commands")->capture_default_str();
    app.add_option("--out", g.out, "output path (stdout when omitted)");
    app.add_option("--v-formula", g.v_formula, "Vasicek forward volatility: derived | printed")
        ->capture_default_str();

    double bond_maturity = 0.0;
    auto* bond = app.add_subcommand("bond", "zero-coupon bond price and spot rate");
    bond->add_option("--maturity,-T", bond_maturity, "bond maturity T (years)")->required();

    OptionFlags option_flags;
    auto* option = app.add_subcommand("option", "European call and put on a zero-coupon bond");
    add_option_flags(option, option_flags, true);

    std::string curve_maturities;
    auto* curve = app.add_subcommand("curve", "yield curve as CSV (T,yield)");
    curve->add_option("--maturities", curve_maturities, "comma-separated maturities")->required();

    std::string theta_grid, expiry_grid;
    auto* fig1 = app.add_subcommand("figure1", "Merton vs Vasicek call prices (CSV)");
    auto* fig2 = app.add_subcommand("figure2", "log price difference ln C_V - ln C_M (CSV)");
    for (auto* cmd : {fig1, fig2}) {
        cmd->add_option("--theta-grid", theta_grid, "comma-separated theta values");
        cmd->add_option("--expiry-grid", expiry_grid, "comma-separated option expiries");
    }

    std::string budget = "quick";
    auto* validate_cmd = app.add_subcommand("validate", "run the oracle cross-checks");
    validate_cmd->add_option("--budget", budget, "quick | full")->capture_default_str();

    MCConfig mc_config;
    std::string scheme = "exact";
    bool no_antithetic = false;
    std::optional<double> mc_maturity;
    OptionFlags mc_flags;
    auto* mc = app.add_subcommand("mc", "Monte Carlo bond (--maturity) or option price");
    mc->add_option("--maturity,-T", mc_maturity, "price a bond with this maturity");
    add_option_flags(mc, mc_flags, false);
    mc->add_option("--paths", mc_config.paths, "number of paths")->capture_default_str();
    mc->add_option("--steps", mc_config.steps, "Euler steps")->capture_default_str();
    mc->add_option("--scheme", scheme, "exact | euler")->capture_default_str();
    mc->add_flag("--no-antithetic", no_antithetic, "disable antithetic pairs");

    std::optional<double> pde_maturity;
    OptionFlags pde_flags;
    std::size_t n_r = 801, n_t = 2000, keep_every = 0;
    auto* pde = app.add_subcommand("pde-dump", "PDE value surface as CSV (t,r,V)");
    pde->add_option("--maturity,-T", pde_maturity, "bond payoff with this maturity");
    add_option_flags(pde, pde_flags, false);
    pde->add_option("--n-r", n_r, "rate nodes (odd)")->capture_default_str();
    pde->add_option("--n-t", n_t, "time steps")->capture_default_str();
    pde->add_option("--keep-every", keep_every, "also store every k-th time step")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (bond->parsed()) return cmd_bond(g, bond_maturity);
        if (option->parsed()) return cmd_option(g, option_flags);
        if (curve->parsed()) return cmd_curve(g, curve_maturities);
        if (fig1->parsed()) {
            const auto rows = figure1(figure_spec(g, theta_grid, expiry_grid));
            emit(g, [&](std::ostream& out) { write_figure1_csv(out, rows); });
            return 0;
        }
        if (fig2->parsed()) {
            const auto rows = figure2(figure_spec(g, theta_grid, expiry_grid));
            std::size_t empty = 0;
            emit(g, [&](std::ostream& out) { empty = write_figure2_csv(out, rows); });
            if (empty > 0) std::cerr << empty << " cell(s) left empty: non-positive option price\n";
            return 0;
        }
        if (validate_cmd->parsed()) {
            ValidationOptions opts;
            if (budget == "full") {
                opts.budget = Budget::Full;
            } else if (budget != "quick") {
                throw InvalidInput("--budget must be quick or full");
            }
            opts.seed = g.seed;
            opts.formula = parse_formula(g.v_formula);
            warn_if_printed(opts.formula);
            const auto results = run_validation(opts);
            print_report(std::cout, results);
            return all_passed(results) ? 0 : kExitValidation;
        }
        if (mc->parsed()) {
            mc_config.antithetic = !no_antithetic;
            return cmd_mc(g, mc_flags, mc_maturity, mc_config, scheme);
        }
        if (pde->parsed()) return cmd_pde_dump(g, pde_flags, pde_maturity, n_r, n_t, keep_every);
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitValidation;
    }
    return kExitUsage;
}

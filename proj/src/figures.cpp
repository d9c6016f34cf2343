#include "affine/figures.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace affine {

FigureSpec default_figure_spec() {
    FigureSpec spec;
    for (int i = 0; i <= 10; ++i) spec.theta_grid.push_back(0.005 * i);
    for (int j = 1; j <= 20; ++j) spec.expiry_grid.push_back(0.25 * j);
    return spec;
}

void check_figure_spec(const FigureSpec& spec) {
    if (spec.theta_grid.empty() || spec.expiry_grid.empty()) {
        throw InvalidInput("figure grids must be non-empty");
    }
    if (!std::is_sorted(spec.theta_grid.begin(), spec.theta_grid.end()) ||
        !std::is_sorted(spec.expiry_grid.begin(), spec.expiry_grid.end())) {
        throw InvalidInput("figure grids must be sorted");
    }
    if (!(spec.expiry_grid.front() > 0.0) || spec.expiry_grid.back() > spec.maturity) {
        throw InvalidInput("option expiries must lie in (0, S]");
    }
    require_valid(validate(Vasicek{spec.kappa, 0.0, spec.sigma}));
}

std::vector<Figure1Row> figure1(const FigureSpec& spec) {
    check_figure_spec(spec);
    const MarketState state{0.0, spec.rate};
    std::vector<Figure1Row> rows;
    rows.reserve(spec.theta_grid.size() * spec.expiry_grid.size());
    for (double theta : spec.theta_grid) {
        const Vasicek vasicek{spec.kappa, theta, spec.sigma};
        const Merton merton{spec.kappa * theta, spec.sigma};
        for (double expiry : spec.expiry_grid) {
            const OptionSpec option{OptionKind::Call, spec.strike, expiry, spec.maturity};
            rows.push_back({theta, expiry, call_price(merton, state, option),
                            call_price(vasicek, state, option, spec.formula)});
        }
    }
    return rows;
}

std::vector<Figure2Row> figure2(const FigureSpec& spec) {
    std::vector<Figure2Row> rows;
    for (const auto& row : figure1(spec)) {
        Figure2Row out{row.theta, row.expiry, std::nullopt};
        if (row.call_merton > 0.0 && row.call_vasicek > 0.0) {
            out.log_difference = std::log(row.call_vasicek) - std::log(row.call_merton);
        }
        rows.push_back(out);
    }
    return rows;
}

void write_figure1_csv(std::ostream& out, const std::vector<Figure1Row>& rows) {
    out << "theta,T,C_merton,C_vasicek\n";
    for (const auto& r : rows) {
        out << fmt::format("{:.6g},{:.6g},{:.12f},{:.12f}\n", r.theta, r.expiry, r.call_merton,
                           r.call_vasicek);
    }
}

std::size_t write_figure2_csv(std::ostream& out, const std::vector<Figure2Row>& rows) {
    std::size_t empty = 0;
    out << "theta,T,ln_CV_minus_ln_CM\n";
    for (const auto& r : rows) {
        out << fmt::format("{:.6g},{:.6g},", r.theta, r.expiry);
        if (r.log_difference) {
            out << fmt::format("{:.12f}", *r.log_difference);
        } else {
            ++empty;
        }
        out << '\n';
    }
    return empty;
}

}  // namespace affine

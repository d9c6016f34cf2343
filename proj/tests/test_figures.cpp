#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "affine/figures.hpp"

using namespace affine;

namespace {

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

}  // namespace

TEST(Figures, DefaultMesh) {
    const auto spec = default_figure_spec();
    EXPECT_EQ(spec.theta_grid.size(), 11u);
    EXPECT_EQ(spec.expiry_grid.size(), 20u);
    EXPECT_EQ(spec.theta_grid.front(), 0.0);
    EXPECT_NEAR(spec.theta_grid.back(), 0.05, 1e-15);
    EXPECT_EQ(spec.expiry_grid.front(), 0.25);
    EXPECT_EQ(spec.expiry_grid.back(), 5.0);
}

TEST(Figures, CsvHeadersAndRowCount) {
    const auto spec = default_figure_spec();
    std::ostringstream f1, f2;
    write_figure1_csv(f1, figure1(spec));
    const auto empty = write_figure2_csv(f2, figure2(spec));
    EXPECT_EQ(first_line(f1.str()), "theta,T,C_merton,C_vasicek");
    EXPECT_EQ(first_line(f2.str()), "theta,T,ln_CV_minus_ln_CM");
    const std::string text = f1.str();
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 221);
    EXPECT_EQ(empty, 0u);
}

TEST(Figures, OutputIsByteStable) {
    std::ostringstream a, b;
    write_figure1_csv(a, figure1(default_figure_spec()));
    write_figure1_csv(b, figure1(default_figure_spec()));
    EXPECT_EQ(a.str(), b.str());
}

TEST(Figures, ExpiryAtMaturityIsIntrinsic) {
    const auto spec = default_figure_spec();
    for (const auto& row : figure1(spec)) {
        if (row.expiry != spec.maturity) continue;
        const MarketState origin{0.0, spec.rate};
        const double bm = bond_price_closed(Merton{spec.kappa * row.theta, spec.sigma}, origin, 5.0);
        const double bv = bond_price_closed(Vasicek{spec.kappa, row.theta, spec.sigma}, origin, 5.0);
        EXPECT_NEAR(row.call_merton, (1.0 - spec.strike) * bm, 1e-15);
        EXPECT_NEAR(row.call_vasicek, (1.0 - spec.strike) * bv, 1e-15);
    }
}

TEST(Figures, ThetaZeroPricesAreClose) {
    double worst = 0.0;
    for (const auto& row : figure1(default_figure_spec())) {
        if (row.theta == 0.0) worst = std::max(worst, std::abs(row.call_merton - row.call_vasicek));
    }
    EXPECT_LT(worst, 0.02);
}

TEST(Figures, LogDifferenceRisesWithTheta) {
    const auto spec = default_figure_spec();
    const auto rows = figure2(spec);
    const std::size_t nt = spec.expiry_grid.size();
    for (std::size_t j = 0; j + 1 < nt; ++j) {  // T = S is flat by construction
        for (std::size_t i = 0; i + 1 < spec.theta_grid.size(); ++i) {
            EXPECT_LT(*rows[i * nt + j].log_difference, *rows[(i + 1) * nt + j].log_difference)
                << "T=" << spec.expiry_grid[j];
        }
    }
}

TEST(Figures, LogDifferenceSmallestAtMaturity) {
    const auto spec = default_figure_spec();
    const auto rows = figure2(spec);
    const std::size_t nt = spec.expiry_grid.size();
    for (std::size_t i = 0; i < spec.theta_grid.size(); ++i) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < nt; ++j) {
            if (std::abs(*rows[i * nt + j].log_difference) < std::abs(*rows[i * nt + best].log_difference)) {
                best = j;
            }
        }
        EXPECT_EQ(best, nt - 1) << "theta=" << spec.theta_grid[i];
    }
}

TEST(Figures, EmptyCellsCounted) {
    std::vector<Figure2Row> rows{{0.0, 1.0, 0.1}, {0.0, 2.0, std::nullopt}};
    std::ostringstream out;
    EXPECT_EQ(write_figure2_csv(out, rows), 1u);
    EXPECT_NE(out.str().find("0,2,\n"), std::string::npos);
}

TEST(Figures, SpecErrors) {
    auto spec = default_figure_spec();
    spec.expiry_grid.push_back(6.0);
    EXPECT_THROW(figure1(spec), InvalidInput);
    spec = default_figure_spec();
    spec.theta_grid.clear();
    EXPECT_THROW(figure1(spec), InvalidInput);
    spec = default_figure_spec();
    spec.kappa = 0.0;
    EXPECT_THROW(figure1(spec), InvalidInput);
}

TEST(Figures, LogDifferenceSmallAtThetaZero) {
    // |C_M - C_V| < 0.02 with prices above 0.2 bounds the log gap by about 0.1.
    double worst = 0.0;
    for (const auto& row : figure2(default_figure_spec())) {
        if (row.theta == 0.0) worst = std::max(worst, std::abs(*row.log_difference));
    }
    EXPECT_LT(worst, 0.1);
}

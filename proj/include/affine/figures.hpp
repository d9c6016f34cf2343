#pragma once

// Merton vs Vasicek call prices on a (theta, expiry) mesh, Merton drift tied
// to phi = kappa * theta.

#include <optional>
#include <ostream>
#include <vector>

#include "affine/closed_form.hpp"

namespace affine {

struct FigureSpec {
    std::vector<double> theta_grid;
    std::vector<double> expiry_grid;
    double kappa = 0.4;
    double sigma = 0.03;
    double rate = 0.0;
    double strike = 0.8;
    double maturity = 5.0;
    VFormula formula = VFormula::Derived;
};

/// theta in {0, 0.005, ..., 0.05}, T in {0.25, 0.5, ..., 5}.
FigureSpec default_figure_spec();

void check_figure_spec(const FigureSpec& spec);

struct Figure1Row {
    double theta = 0.0;
    double expiry = 0.0;
    double call_merton = 0.0;
    double call_vasicek = 0.0;
};

struct Figure2Row {
    double theta = 0.0;
    double expiry = 0.0;
    std::optional<double> log_difference;  ///< ln C_V - ln C_M, empty if a price is <= 0
};

std::vector<Figure1Row> figure1(const FigureSpec& spec);
std::vector<Figure2Row> figure2(const FigureSpec& spec);

void write_figure1_csv(std::ostream& out, const std::vector<Figure1Row>& rows);

/// Returns the number of empty cells.
std::size_t write_figure2_csv(std::ostream& out, const std::vector<Figure2Row>& rows);

}  // namespace affine

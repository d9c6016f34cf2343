#pragma once

// Cross-checks closed forms, the Riccati engine, Monte Carlo and the PDE solver
// against each other at a fixed set of reference points.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "affine/closed_form.hpp"

namespace affine {

enum class Budget {
    Quick,  ///< 1e5 paths, 401 x 1000 PDE grid
    Full,   ///< 1e6 paths, 801 x 2000 PDE grid
};

struct ValidationOptions {
    Budget budget = Budget::Quick;
    std::uint64_t seed = 42;
    VFormula formula = VFormula::Derived;  ///< used for every closed-form Vasicek v
};

struct CheckResult {
    std::string name;
    double measured = 0.0;   ///< absolute error, or error in standard errors for MC checks
    double tolerance = 0.0;
    bool pass = false;
};

std::vector<CheckResult> run_validation(const ValidationOptions& options);

bool all_passed(const std::vector<CheckResult>& results);

void print_report(std::ostream& out, const std::vector<CheckResult>& results);

}  // namespace affine

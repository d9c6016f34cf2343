#include "affine/model.hpp"

#include <cmath>
#include <type_traits>

namespace affine {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_finite(std::vector<Violation>& out, const char* field, double value) {
    if (!std::isfinite(value)) {
        out.push_back({field, std::string(field) + " must be finite"});
    }
}

}  // namespace

GenericAffine to_generic(const ModelParams& params) noexcept {
    return std::visit(
        Overloaded{
            [](const Merton& m) { return GenericAffine{m.phi, 0.0, m.sigma * m.sigma, 0.0}; },
            [](const Vasicek& v) {
                return GenericAffine{v.kappa * v.theta, v.kappa, v.sigma * v.sigma, 0.0};
            },
            [](const GenericAffine& g) { return g; },
        },
        params);
}

std::string model_name(const ModelParams& params) {
    return std::visit(Overloaded{
                          [](const Merton&) { return std::string("merton"); },
                          [](const Vasicek&) { return std::string("vasicek"); },
                          [](const GenericAffine&) { return std::string("affine"); },
                      },
                      params);
}

std::vector<Violation> validate(const ModelParams& params) {
    std::vector<Violation> out;
    std::visit(Overloaded{
                   [&](const Merton& m) {
                       check_finite(out, "phi", m.phi);
                       if (!(m.sigma > 0.0)) out.push_back({"sigma", "sigma must be positive"});
                   },
                   [&](const Vasicek& v) {
                       if (!(v.kappa > 0.0)) out.push_back({"kappa", "kappa must be positive"});
                       check_finite(out, "theta", v.theta);
                       if (!(v.sigma > 0.0)) out.push_back({"sigma", "sigma must be positive"});
                   },
                   [&](const GenericAffine& g) {
                       check_finite(out, "alpha1", g.alpha1);
                       check_finite(out, "alpha2", g.alpha2);
                       if (!(g.beta1 >= 0.0)) {
                           out.push_back({"beta1", "beta1 must be non-negative"});
                       }
                       if (!(g.beta2 >= 0.0)) {
                           out.push_back({"beta2", "beta2 must be non-negative"});
                       }
                       if (g.beta1 == 0.0 && g.beta2 == 0.0) {
                           out.push_back({"beta1,beta2", "degenerate diffusion"});
                       }
                   },
               },
               params);
    return out;
}

std::vector<Violation> validate(const ModelParams& params, const MarketState& state) {
    auto out = validate(params);
    if (!(state.t >= 0.0) || !std::isfinite(state.t)) {
        out.push_back({"t", "valuation time must be finite and non-negative"});
    }
    check_finite(out, "r", state.r);
    if (const auto* g = std::get_if<GenericAffine>(&params); g != nullptr && g->beta2 > 0.0) {
        if (g->beta1 + g->beta2 * state.r < 0.0) {
            out.push_back({"r", "beta1 + beta2 * r must be non-negative"});
        }
    }
    return out;
}

std::vector<Violation> validate(const OptionSpec& spec, const MarketState& state) {
    std::vector<Violation> out;
    if (!(spec.strike > 0.0) || !std::isfinite(spec.strike)) {
        out.push_back({"strike", "strike must be positive"});
    }
    if (!(spec.expiry >= state.t)) out.push_back({"expiry", "expiry must not precede t"});
    if (!(spec.bond_maturity >= spec.expiry)) {
        out.push_back({"bond_maturity", "bond maturity must not precede expiry"});
    }
    return out;
}

std::string to_string(const std::vector<Violation>& violations) {
    std::string s;
    for (const auto& v : violations) {
        if (!s.empty()) s += "; ";
        s += v.message;
    }
    return s;
}

void require_valid(const std::vector<Violation>& violations) {
    if (!violations.empty()) throw InvalidInput(to_string(violations));
}

}  // namespace affine

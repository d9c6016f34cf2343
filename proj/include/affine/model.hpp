#pragma once

// One-factor affine short-rate models.
//
// Under the risk-neutral measure the short rate follows
//
//   dr = (alpha1 - alpha2 r) dt + sqrt(beta1 + beta2 r) dW
//
// and zero-coupon bond prices take the exponential-affine form
//
//   B(t, T) = exp(-a(T - t) - r b(T - t)).
//
// Merton (dr = phi dt + sigma dW) and Vasicek (dr = kappa (theta - r) dt + sigma dW)
// are the two named members of the family with closed-form a and b.

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace affine {

/// Precondition violated by caller-supplied data.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical routine could not produce a finite, consistent answer.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Merton {
    double phi = 0.0;    ///< constant drift of the short rate
    double sigma = 0.0;  ///< absolute volatility of the short rate
};

struct Vasicek {
    double kappa = 0.0;  ///< mean-reversion speed
    double theta = 0.0;  ///< long-term level
    double sigma = 0.0;
};

struct GenericAffine {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;

    bool gaussian() const noexcept { return beta2 == 0.0; }
};

using ModelParams = std::variant<Merton, Vasicek, GenericAffine>;

struct MarketState {
    double t = 0.0;  ///< valuation time in years
    double r = 0.0;  ///< current short rate
};

enum class OptionKind { Call, Put };

struct OptionSpec {
    OptionKind kind = OptionKind::Call;
    double strike = 0.0;
    double expiry = 0.0;         ///< option exercise date T
    double bond_maturity = 0.0;  ///< maturity S of the underlying bond
};

struct Violation {
    std::string field;
    std::string message;
};

GenericAffine to_generic(const ModelParams& params) noexcept;

std::string model_name(const ModelParams& params);

/// Lists every violated parameter/state invariant; empty means valid.
std::vector<Violation> validate(const ModelParams& params);
std::vector<Violation> validate(const ModelParams& params, const MarketState& state);
std::vector<Violation> validate(const OptionSpec& spec, const MarketState& state);

/// Throws InvalidInput carrying every violation joined into one message.
void require_valid(const std::vector<Violation>& violations);

std::string to_string(const std::vector<Violation>& violations);

}  // namespace affine

#pragma once

// JSON encoding of model parameters and market state.
//
//   {"model": "merton",  "phi": 0.02, "sigma": 0.03}
//   {"model": "vasicek", "kappa": 0.4, "theta": 0.05, "sigma": 0.03}
//   {"model": "affine",  "alpha1": ..., "alpha2": ..., "beta1": ..., "beta2": ...}
//   {"t": 0.0, "r": 0.03}

#include <string>

#include <json.hpp>

#include "affine/model.hpp"

namespace affine {

nlohmann::json to_json(const ModelParams& params);
nlohmann::json to_json(const MarketState& state);

/// Throws InvalidInput on an unknown discriminator, a missing field or a
/// non-numeric value. Parameter invariants are not checked here.
ModelParams model_from_json(const nlohmann::json& j);
MarketState state_from_json(const nlohmann::json& j);

/// Parses text; malformed JSON is reported as InvalidInput.
nlohmann::json parse_json_text(const std::string& text);

}  // namespace affine

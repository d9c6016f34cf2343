#include "affine/json.hpp"

namespace affine {

namespace {

double number(const nlohmann::json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw InvalidInput(std::string("missing field \"") + key + "\"");
    if (!it->is_number()) throw InvalidInput(std::string("field \"") + key + "\" must be a number");
    return it->get<double>();
}

}  // namespace

nlohmann::json to_json(const ModelParams& params) {
    nlohmann::json j;
    if (const auto* m = std::get_if<Merton>(&params)) {
        j = {{"model", "merton"}, {"phi", m->phi}, {"sigma", m->sigma}};
    } else if (const auto* v = std::get_if<Vasicek>(&params)) {
        j = {{"model", "vasicek"}, {"kappa", v->kappa}, {"theta", v->theta}, {"sigma", v->sigma}};
    } else {
        const auto& g = std::get<GenericAffine>(params);
        j = {{"model", "affine"},
             {"alpha1", g.alpha1},
             {"alpha2", g.alpha2},
             {"beta1", g.beta1},
             {"beta2", g.beta2}};
    }
    return j;
}

nlohmann::json to_json(const MarketState& state) { return {{"t", state.t}, {"r", state.r}}; }

ModelParams model_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InvalidInput("model must be a JSON object");
    auto it = j.find("model");
    if (it == j.end() || !it->is_string()) {
        throw InvalidInput("missing \"model\" discriminator (merton | vasicek | affine)");
    }
    const auto name = it->get<std::string>();
    if (name == "merton") return Merton{number(j, "phi"), number(j, "sigma")};
    if (name == "vasicek") {
        return Vasicek{number(j, "kappa"), number(j, "theta"), number(j, "sigma")};
    }
    if (name == "affine") {
        return GenericAffine{number(j, "alpha1"), number(j, "alpha2"), number(j, "beta1"),
                             number(j, "beta2")};
    }
    throw InvalidInput("unknown model \"" + name + "\"");
}

MarketState state_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InvalidInput("state must be a JSON object");
    return {number(j, "t"), number(j, "r")};
}

nlohmann::json parse_json_text(const std::string& text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidInput(std::string("malformed JSON: ") + e.what());
    }
}

}  // namespace affine

#include "capalarm/model_json.hpp"

#include "capalarm/errors.hpp"

#include <cmath>
#include <initializer_list>
#include <limits>
#include <set>
#include <string>

namespace capalarm {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::string& what, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw DomainError(what + ": expected a JSON object");
    const std::set<std::string> names(allowed.begin(), allowed.end());
    for (const auto& item : j.items())
        if (!names.count(item.key())) throw DomainError(what + ": unknown field '" + item.key() + "'");
}

double number(const json& j, const std::string& what, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) throw DomainError(what + ": missing field '" + key + "'");
    if (it->is_string() && it->get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
    if (!it->is_number()) throw DomainError(what + ": field '" + std::string(key) + "' must be a number");
    return it->get<double>();
}

json number_json(double v) {
    if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
    return v;
}

} // namespace

bool is_spectral_model_json(const json& j) {
    return j.is_object() && j.contains("type");
}

DejdParams dejd_params_from_json(const json& j) {
    const std::string what = "DejdParams";
    reject_unknown(j, what, {"mu", "sigma", "lambda", "p", "eta_minus", "eta_plus"});
    DejdParams p;
    p.mu = number(j, what, "mu");
    p.sigma = number(j, what, "sigma");
    p.lambda = number(j, what, "lambda");
    p.p = number(j, what, "p");
    p.eta_minus = number(j, what, "eta_minus");
    p.eta_plus = number(j, what, "eta_plus");
    p.validate();
    return p;
}

SpectralNegModel spectral_model_from_json(const json& j) {
    if (!is_spectral_model_json(j) || !j.at("type").is_string())
        throw DomainError("SpectralNegModel: missing string field 'type'");
    const auto type = j.at("type").get<std::string>();
    SpectralNegModel model;
    if (type == "ExpJumpCPP") {
        reject_unknown(j, type, {"type", "mu", "sigma", "lambda", "eta"});
        model = ExpJumpCPP{number(j, type, "mu"), number(j, type, "sigma"), number(j, type, "lambda"),
                           number(j, type, "eta")};
    } else if (type == "TemperedStable") {
        reject_unknown(j, type, {"type", "c", "bigC", "lam", "alpha"});
        model = TemperedStable{number(j, type, "c"), number(j, type, "bigC"), number(j, type, "lam"),
                               number(j, type, "alpha")};
    } else if (type == "VarianceGamma") {
        reject_unknown(j, type, {"type", "c", "bigC", "lam"});
        model = VarianceGamma{number(j, type, "c"), number(j, type, "bigC"), number(j, type, "lam")};
    } else {
        throw DomainError("SpectralNegModel: unknown type '" + type + "'");
    }
    validate(model);
    return model;
}

CostSpec cost_spec_from_json(const json& j) {
    const std::string what = "CostSpec";
    reject_unknown(j, what, {"q", "gamma", "h"});
    CostSpec cost;
    cost.q = number(j, what, "q");
    cost.gamma = number(j, what, "gamma");
    if (const auto it = j.find("h"); it != j.end()) {
        std::string type;
        if (it->is_string()) {
            type = it->get<std::string>();
            if (type != "Constant1") throw DomainError("CostSpec: h '" + type + "' needs an object form");
        } else if (it->is_object() && it->contains("type") && it->at("type").is_string()) {
            type = it->at("type").get<std::string>();
        } else {
            throw DomainError("CostSpec: field 'h' must be a string or an object with 'type'");
        }
        if (type == "Constant1") {
            if (it->is_object()) reject_unknown(*it, "h", {"type"});
            cost.h = Constant1{};
        } else if (type == "ExpUtility") {
            reject_unknown(*it, "h", {"type", "rho"});
            cost.h = ExpUtility{number(*it, "h", "rho")};
        } else {
            throw DomainError("CostSpec: unsupported penalty type '" + type + "'");
        }
    }
    cost.validate();
    return cost;
}

json to_json(const DejdParams& p) {
    return json{{"mu", p.mu},       {"sigma", p.sigma},         {"lambda", p.lambda},
                {"p", p.p},         {"eta_minus", p.eta_minus}, {"eta_plus", p.eta_plus}};
}

json to_json(const SpectralNegModel& model) {
    if (const auto* m = std::get_if<ExpJumpCPP>(&model))
        return json{{"type", "ExpJumpCPP"}, {"mu", m->mu}, {"sigma", m->sigma}, {"lambda", m->lambda}, {"eta", m->eta}};
    if (const auto* m = std::get_if<TemperedStable>(&model))
        return json{{"type", "TemperedStable"}, {"c", m->c}, {"bigC", m->bigC}, {"lam", m->lam}, {"alpha", m->alpha}};
    const auto& m = std::get<VarianceGamma>(model);
    return json{{"type", "VarianceGamma"}, {"c", m.c}, {"bigC", m.bigC}, {"lam", m.lam}};
}

json to_json(const CostSpec& cost) {
    json h;
    if (const auto* e = std::get_if<ExpUtility>(&cost.h))
        h = json{{"type", "ExpUtility"}, {"rho", number_json(e->rho)}};
    else
        h = json{{"type", penalty_name(cost.h)}};
    return json{{"q", cost.q}, {"gamma", cost.gamma}, {"h", h}};
}

} // namespace capalarm

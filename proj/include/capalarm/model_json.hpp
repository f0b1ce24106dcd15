#pragma once

#include "capalarm/levy_models.hpp"

#include <json.hpp>

namespace capalarm {

// JSON documents use the struct field names verbatim. Unknown or missing
// fields raise DomainError naming the offending key.
//
//   DejdParams:       {"mu", "sigma", "lambda", "p", "eta_minus", "eta_plus"}
//   SpectralNegModel: {"type": "ExpJumpCPP", "mu", "sigma", "lambda", "eta"}
//                     {"type": "TemperedStable", "c", "bigC", "lam", "alpha"}
//                     {"type": "VarianceGamma", "c", "bigC", "lam"}
//   CostSpec:         {"q", "gamma", "h": {"type": "Constant1"} |
//                                         {"type": "ExpUtility", "rho"}}
//
// "h" may also be given as the bare string "Constant1". Custom penalties are
// not representable in JSON.

DejdParams dejd_params_from_json(const nlohmann::json& j);
SpectralNegModel spectral_model_from_json(const nlohmann::json& j);
CostSpec cost_spec_from_json(const nlohmann::json& j);

/// True when the document carries a "type" tag, i.e. describes a
/// spectrally negative model rather than DejdParams.
bool is_spectral_model_json(const nlohmann::json& j);

nlohmann::json to_json(const DejdParams& params);
nlohmann::json to_json(const SpectralNegModel& model);
nlohmann::json to_json(const CostSpec& cost);

} // namespace capalarm

#pragma once

// JSON wire format shared by the CLI and the tests. Numbers are rounded to 12
// significant digits on output; non-finite values are written as the strings
// "inf", "-inf" and "nan".

#include "stefan1d/maximal.hpp"
#include "stefan1d/measure.hpp"
#include "stefan1d/particles.hpp"
#include "stefan1d/potential.hpp"
#include "stefan1d/stability.hpp"

#include <json.hpp>

namespace stefan1d {

using Json = nlohmann::json;

/// x rounded to `digits` significant digits (non-finite values pass through).
double round_sig(double x, int digits = 12);
Json number(double x);

Json to_json(const StepMeasure& mu);
Json to_json(const OpenSet1D& domain);
Json to_json(const OrderCertificate& cert);
Json to_json(const BlockPair& bp);
Json to_json(const MaximalSolution& sol);
Json to_json(const PiecewiseQuadratic& u);
Json to_json(const SimConfig& cfg);
Json to_json(const RunReport& report);
Json to_json(const StabilityReport& rep);

/// Throw ValidationError on schema mismatch.
StepMeasure measure_from_json(const Json& j);
OpenSet1D open_set_from_json(const Json& j);
SimConfig sim_config_from_json(const Json& j);
LipschitzFamilyParams lipschitz_params_from_json(const Json& j);

} // namespace stefan1d

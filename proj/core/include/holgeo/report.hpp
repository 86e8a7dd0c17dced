#pragma once

#include <string>

#include <json.hpp>

#include "holgeo/complex_ode.hpp"
#include "holgeo/result.hpp"

namespace holgeo::report {

using Json = nlohmann::ordered_json;

/// Serialize with every floating-point number printed at 17 significant
/// digits, so identical inputs produce byte-identical reports.
std::string dump(const Json& j, int indent = 2);

Json complex_json(Cx value);
Json config_json(const IntegratorConfig& config);
Json termination_json(const Termination& termination);

}  // namespace holgeo::report

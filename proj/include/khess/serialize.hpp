#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "khess/energy.hpp"
#include "khess/funcspace.hpp"
#include "khess/quadrature.hpp"

// JSON schemas for the external interfaces. Specs round-trip:
// spec_from_json(spec_to_json(u)) reproduces u exactly, and printing the
// result again yields byte-identical JSON. Parse errors are reported as
// ConfigError carrying the dotted path of the offending field.
//
//   FunctionSpec   {"space":"complex","n":2,"variant":{...}}
//     radial_poly         {"type":"radial_poly","coeffs":[0.5,1.2],"vanishing":true}
//     quadratic           {"type":"quadratic","matrix":[[e,..],..],"shift":0.0}
//                         entries are numbers (real space) or [re,im] pairs
//     perturbed           {"type":"perturbed","base":<spec>,"bump":{"dim":4,
//                          "terms":[{"coef":1.5,"expo":[1,0,2,0]}]},"amplitude":0.01}
//     linear_combination  {"type":"linear_combination","weights":[..],"parts":[<spec>,..]}
//
//   quadrature     {"kind":"radial_gauss","nodes":64} | {"kind":"grid","resolution":48}
//   EnergyValue    {"value":v,"tau":t,"scheme":<quadrature>}

namespace khess {

/// Typed field access with dotted-path ConfigError reporting, shared by all
/// config parsers.
namespace field {
[[noreturn]] void fail(const std::string& path, const std::string& msg);
const nlohmann::json& require(const nlohmann::json& j, const char* key,
                              const std::string& path);
double number(const nlohmann::json& j, const std::string& path);
int integer(const nlohmann::json& j, const std::string& path);
uint64_t unsigned64(const nlohmann::json& j, const std::string& path);
bool boolean(const nlohmann::json& j, const std::string& path);
std::string text(const nlohmann::json& j, const std::string& path);
Eigen::VectorXd vector(const nlohmann::json& j, const std::string& path);
}  // namespace field

std::string hex64(uint64_t value);

nlohmann::json spec_to_json(const FunctionSpec& u);
FunctionSpec spec_from_json(const nlohmann::json& j, const std::string& path = "spec");

nlohmann::json quadrature_to_json(const QuadratureSpec& q);
QuadratureSpec quadrature_from_json(const nlohmann::json& j,
                                    const std::string& path = "quadrature");

nlohmann::json energy_to_json(const EnergyValue& e);

/// Canonical byte form used for digests: compact dump with sorted keys and
/// shortest round-trip number formatting.
std::string canonical_dump(const nlohmann::json& j);

uint64_t fnv1a64(std::string_view bytes);

/// FNV-1a 64 of the canonical JSON form, as 16 lowercase hex digits.
std::string spec_digest(const FunctionSpec& u);

/// Shortest decimal form that parses back to the same double. Used for CSV
/// cells so report bytes are reproducible.
std::string format_double(double x);

}  // namespace khess

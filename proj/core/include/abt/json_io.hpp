#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "abt/currents.hpp"
#include "abt/direction_measure.hpp"
#include "abt/hypermetric.hpp"
#include "abt/solver.hpp"

namespace abt {

/// %.17g: every double is printed with up to 17 significant digits so that
/// outputs round-trip and byte-level determinism is checkable.
std::string format_double(double x);

// Parsing. Numeric fields may be strings of the form "$name"; the value is
// substituted from `subs` (used by CLI parameter sweeps). Parse failures
// throw ParseError, semantic problems SemanticError.
double json_number(const nlohmann::json& j, const std::map<std::string, double>& subs = {});
BranchingFunction parse_branching(const nlohmann::json& j,
                                  const std::map<std::string, double>& subs = {});
Anisotropy parse_gauge(const nlohmann::json& j, const std::map<std::string, double>& subs = {});
TransportProblem parse_problem(const nlohmann::json& j,
                               const std::map<std::string, double>& subs = {});
PolyhedralOneCurrent parse_current(const nlohmann::json& j,
                                   const std::map<std::string, double>& subs = {});
ZeroCurrent parse_zero_current(const nlohmann::json& j,
                               const std::map<std::string, double>& subs = {});

/// Parses a whole document, attaching line/column information to errors.
nlohmann::json parse_document(const std::string& text);

// Serialization (deterministic key order, 17 significant digits).
std::string to_json(const PolyhedralOneCurrent& p);
std::string to_json(const ZeroCurrent& z);
std::string to_json(const DirectionMeasure& mu);
std::string to_json(const HypermetricCertificate& cert);
std::string network_to_json(const Network& net);

}  // namespace abt

#ifndef LDLCERT_JSON_IO_HPP
#define LDLCERT_JSON_IO_HPP

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ldlcert/behavior.hpp"
#include "ldlcert/ldl_polytope.hpp"
#include "ldlcert/mdl_polytope.hpp"

namespace ldlc {

/// Counts use the JointDistribution cell layout.
struct CountsTable {
    Scenario scenario;
    std::vector<std::int64_t> counts;
};

using DataFile = std::variant<CountsTable, JointDistribution, LossyBehavior, Behavior>;

/// File schema: { "scenario": {"parties":N, "inputs":[...], "outcomes":[...]},
/// "kind": "counts"|"joint_probabilities"|"lossy_behavior"|"behavior",
/// "entries": [ {"a":[...], "x":[...], "value":v, "error":e?}, ... ] }.
/// Unlisted entries default to 0; a JSON null in "a" is the no-detection
/// symbol (lossy_behavior only).
DataFile parse_data_file(const nlohmann::json& j);
DataFile load_data_file(const std::string& path);

nlohmann::json to_json(const Behavior& b);
nlohmann::json to_json(const LossyBehavior& l);
nlohmann::json to_json(const JointDistribution& j);
nlohmann::json counts_to_json(const Scenario& s, const std::vector<std::int64_t>& counts);

nlohmann::json to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j);

nlohmann::json vertex_set_to_json(const VertexSet& vs);
nlohmann::json vertex_set_to_json(const MdlVertexSet& vs);

void write_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace ldlc

#endif

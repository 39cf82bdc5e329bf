#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "tspd/chain.hpp"
#include "tspd/instance.hpp"
#include "tspd/predictor.hpp"

namespace tspd::io {

// {"alpha": r, "flying_range_pct": r|null, "eligible": [ids]|null,
//  "nodes": [{"id": i, "x": r, "y": r}, ...]}; ids are 1-based, the first node is the depot.
nlohmann::json instance_to_json(const Instance& instance);
// Throws std::runtime_error describing the first structural problem.
Instance instance_from_json(const nlohmann::json& doc);
Instance read_instance(const std::string& path);
void write_instance(const std::string& path, const Instance& instance);

// {"total_cost": r, "rings": [{"start": i, "end": j, "drone": k|null, "truck_interior": [...]}]}
nlohmann::json solution_to_json(const Chain& chain);

// Predictor wire item plus the label "y".
nlohmann::json dataset_row(const ChainletGraph& graph, double normalized_cost);

}  // namespace tspd::io

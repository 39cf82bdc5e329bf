#include "tspd/io.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace tspd::io {

using nlohmann::json;

json instance_to_json(const Instance& instance) {
    json doc;
    doc["alpha"] = instance.alpha();
    if (auto f = instance.flying_range_pct()) {
        doc["flying_range_pct"] = *f;
    } else {
        doc["flying_range_pct"] = nullptr;
    }
    if (instance.restricts_eligibility()) {
        json ids = json::array();
        for (NodeIndex v : instance.eligible_nodes()) ids.push_back(v + 1);
        doc["eligible"] = std::move(ids);
    } else {
        doc["eligible"] = nullptr;
    }
    json nodes = json::array();
    const auto& pts = instance.points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        nodes.push_back({{"id", i + 1}, {"x", pts[i].x}, {"y", pts[i].y}});
    }
    doc["nodes"] = std::move(nodes);
    return doc;
}

Instance instance_from_json(const json& doc) {
    if (!doc.is_object()) throw std::runtime_error("instance must be a JSON object");
    if (!doc.contains("alpha") || !doc["alpha"].is_number()) throw std::runtime_error("instance needs numeric alpha");
    if (!doc.contains("nodes") || !doc["nodes"].is_array()) throw std::runtime_error("instance needs a nodes array");

    std::vector<Point> points;
    std::set<long long> ids;
    for (const auto& node : doc["nodes"]) {
        if (!node.is_object() || !node.contains("id") || !node["id"].is_number_integer() || !node.contains("x") ||
            !node["x"].is_number() || !node.contains("y") || !node["y"].is_number()) {
            throw std::runtime_error("each node needs integer id and numeric x, y");
        }
        const auto id = node["id"].get<long long>();
        if (id != static_cast<long long>(points.size()) + 1) {
            throw std::runtime_error("node ids must be unique, contiguous from 1 and listed in order");
        }
        ids.insert(id);
        points.push_back({node["x"].get<double>(), node["y"].get<double>()});
    }

    std::optional<double> range;
    if (doc.contains("flying_range_pct") && !doc["flying_range_pct"].is_null()) {
        if (!doc["flying_range_pct"].is_number()) throw std::runtime_error("flying_range_pct must be a number or null");
        range = doc["flying_range_pct"].get<double>();
    }
    std::optional<std::vector<NodeIndex>> eligible;
    if (doc.contains("eligible") && !doc["eligible"].is_null()) {
        if (!doc["eligible"].is_array()) throw std::runtime_error("eligible must be an array or null");
        eligible.emplace();
        for (const auto& id : doc["eligible"]) {
            if (!id.is_number_integer()) throw std::runtime_error("eligible ids must be integers");
            eligible->push_back(static_cast<NodeIndex>(id.get<long long>() - 1));
        }
    }
    try {
        return build_instance(points, doc["alpha"].get<double>(), range, std::move(eligible));
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(e.what());
    }
}

Instance read_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    return instance_from_json(doc);
}

void write_instance(const std::string& path, const Instance& instance) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << instance_to_json(instance).dump(2) << '\n';
}

json solution_to_json(const Chain& chain) {
    json rings = json::array();
    for (const auto& r : chain.rings()) {
        json interior = json::array();
        for (NodeIndex v : r.interior_truck()) interior.push_back(v + 1);
        json ring = {{"start", r.start() + 1}, {"end", r.end() + 1}, {"truck_interior", std::move(interior)}};
        if (r.drone) {
            ring["drone"] = *r.drone + 1;
        } else {
            ring["drone"] = nullptr;
        }
        rings.push_back(std::move(ring));
    }
    return {{"total_cost", chain.total_cost()}, {"rings", std::move(rings)}};
}

json dataset_row(const ChainletGraph& graph, double normalized_cost) {
    json item = json::parse(encode_request(0, std::span(&graph, 1)))["items"][0];
    item["y"] = normalized_cost;
    return item;
}

}  // namespace tspd::io

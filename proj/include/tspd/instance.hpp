#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tspd {

// Nodes are addressed by 0-based index internally; index 0 is the depot.
// External files use 1-based ids (id = index + 1).
using NodeIndex = int;

struct Point {
    double x = 0.0;
    double y = 0.0;
};

// Symmetric cost matrices. drone(u,v) = distance(u,v) / alpha and
// truck(u,v) = alpha * drone(u,v), so the speed ratio holds bit-exactly.
class CostModel {
public:
    CostModel() = default;
    CostModel(const std::vector<Point>& points, double alpha);

    int size() const { return n_; }
    double alpha() const { return alpha_; }
    double truck(NodeIndex u, NodeIndex v) const { return truck_[idx(u, v)]; }
    double drone(NodeIndex u, NodeIndex v) const { return drone_[idx(u, v)]; }
    // Euclidean distance; flight-range budgets are expressed in this metric.
    double distance(NodeIndex u, NodeIndex v) const { return dist_[idx(u, v)]; }
    double d_max() const { return d_max_; }

private:
    std::size_t idx(NodeIndex u, NodeIndex v) const {
        return static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v);
    }

    int n_ = 0;
    double alpha_ = 1.0;
    double d_max_ = 0.0;
    std::vector<double> dist_;
    std::vector<double> truck_;
    std::vector<double> drone_;
};

class Instance {
public:
    Instance(std::vector<Point> points, double alpha, std::optional<double> flying_range_pct,
             std::optional<std::vector<NodeIndex>> eligible);

    int node_count() const { return static_cast<int>(points_.size()); }
    const std::vector<Point>& points() const { return points_; }
    double alpha() const { return alpha_; }
    // nullopt means unlimited; values >= 200 are normalized to unlimited.
    std::optional<double> flying_range_pct() const { return flying_range_pct_; }
    bool restricts_eligibility() const { return restricted_; }
    bool is_eligible(NodeIndex v) const { return v != 0 && eligible_mask_[static_cast<std::size_t>(v)]; }
    std::vector<NodeIndex> eligible_nodes() const;
    const CostModel& costs() const { return costs_; }

    // Absolute flying budget, (f / 100) * d_max, or nullopt when unlimited.
    std::optional<double> range_limit() const;

private:
    std::vector<Point> points_;
    double alpha_;
    std::optional<double> flying_range_pct_;
    bool restricted_ = false;
    std::vector<bool> eligible_mask_;
    CostModel costs_;
};

// Throws std::invalid_argument on fewer than 2 points, alpha < 1, a
// non-positive range, or an eligibility set naming the depot or an unknown node.
Instance build_instance(const std::vector<Point>& coords, double alpha,
                        std::optional<double> flying_range_pct = std::nullopt,
                        std::optional<std::vector<NodeIndex>> eligible = std::nullopt);

// Pairs of node indices sharing identical coordinates.
std::vector<std::pair<NodeIndex, NodeIndex>> duplicate_points(const Instance& instance);

enum class Distribution { uniform, one_center, two_center };

std::optional<Distribution> parse_distribution(const std::string& name);
std::string to_string(Distribution dist);

struct GeneratorParams {
    double side = 100.0;           // points live in [0, side]^2
    double one_center_sigma = 25.0;
    double two_center_sigma = 12.5;
    // Cluster centers sit at (a, a) and (b, b) with a, b given as fractions of side.
    double two_center_first = 0.25;
    double two_center_second = 0.75;
};

std::vector<Point> generate_points(Distribution dist, int n, std::uint64_t seed,
                                   const GeneratorParams& params = {});

Instance generate(Distribution dist, int n, std::uint64_t seed, double alpha = 2.0,
                  std::optional<double> flying_range_pct = std::nullopt,
                  const GeneratorParams& params = {});

}  // namespace tspd

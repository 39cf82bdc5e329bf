#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tspd/instance.hpp"

namespace tspd {

// One truck-drone operation covering a contiguous piece of the node sequence.
// path holds the covered nodes in sequence order (start ... end); the drone
// node, when present, is one of its interior entries.
struct Ring {
    std::vector<NodeIndex> path;
    std::optional<NodeIndex> drone;
    double truck_time = 0.0;
    double drone_time = 0.0;
    double cost = 0.0;

    NodeIndex start() const { return path.front(); }
    NodeIndex end() const { return path.back(); }
    bool is_straight() const { return !drone.has_value(); }
    bool is_triangle() const { return drone.has_value() && path.size() == 3; }
    std::vector<NodeIndex> interior_truck() const;
    // Distinct nodes covered.
    int size() const;

    bool operator==(const Ring&) const = default;
};

// Feasibility rules applied to drone operations.
struct ConstraintSet {
    std::optional<double> range_limit;  // absolute budget on the two flight legs
    std::vector<bool> eligible;         // indexed by node; depot is always false

    static ConstraintSet from_instance(const Instance& instance);
    static ConstraintSet unrestricted(int node_count);

    bool is_eligible(NodeIndex v) const { return eligible[static_cast<std::size_t>(v)]; }
    // Canonical test shared by every enumeration path: d(s,k) + d(k,e) <= limit.
    bool flight_feasible(const CostModel& costs, NodeIndex start, NodeIndex drone, NodeIndex end) const {
        return !range_limit || costs.distance(start, drone) + costs.distance(drone, end) <= *range_limit;
    }
};

// Per-node ordering of all nodes by increasing distance. For a launch leg of
// length a, the admissible landing nodes from drone node k form a prefix of
// k's ordering; after one binary search per (start, drone) pair each landing
// candidate is tested by a single rank comparison.
class RangeIndex {
public:
    RangeIndex() = default;
    RangeIndex(const CostModel& costs, double range_limit);

    double range_limit() const { return limit_; }
    // Number of nodes v with launch_leg + d(k, v) <= limit.
    int admissible_count(NodeIndex k, double launch_leg) const;
    int rank(NodeIndex k, NodeIndex v) const { return rank_[idx(k, v)]; }

private:
    std::size_t idx(NodeIndex u, NodeIndex v) const {
        return static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v);
    }

    int n_ = 0;
    double limit_ = 0.0;
    std::vector<double> sorted_dist_;  // row k: distances from k in increasing order
    std::vector<int> rank_;            // rank_[k][v]: position of v in row k
};

RangeIndex preprocess_range(const CostModel& costs, double range_limit);

struct EPResult {
    std::vector<Ring> chain;
    double value = 0.0;
    std::int64_t rings_enumerated = 0;
};

// Everything the partitioner needs besides the sequence. Build once per
// instance and share across calls.
class PartitionContext {
public:
    PartitionContext(const CostModel& costs, ConstraintSet constraints);
    explicit PartitionContext(const Instance& instance);

    const CostModel& costs() const { return *costs_; }
    const ConstraintSet& constraints() const { return constraints_; }
    const RangeIndex* range_index() const { return range_ ? &*range_ : nullptr; }

private:
    const CostModel* costs_;
    ConstraintSet constraints_;
    std::optional<RangeIndex> range_;
};

// Optimal split of a fixed node sequence into feasible rings, enumerating
// only candidate rings up to the per-(start, drone) cutoff where the drone
// stops being the slower vehicle. Throws std::invalid_argument for sequences
// shorter than 2.
EPResult exact_partition(std::span<const NodeIndex> sequence, const PartitionContext& ctx);

// Value only, no chain reconstruction; used inside local search.
double exact_partition_value(std::span<const NodeIndex> sequence, const PartitionContext& ctx);

// Builds a ring over sequence[i..j] with the drone at position k (or a
// straight ring when k is empty), computing its times from scratch.
Ring make_ring(std::span<const NodeIndex> sequence, std::size_t i, std::size_t j, std::optional<std::size_t> k,
               const CostModel& costs);

}  // namespace tspd

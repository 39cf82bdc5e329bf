#pragma once

#include <span>
#include <vector>

#include "tspd/instance.hpp"
#include "tspd/partition.hpp"

namespace tspd::oracle {

// Brute-force references. Nothing here shares code with the pruned
// partitioner beyond the cost model and the feasibility predicate.

struct RingTableEntry {
    std::size_t start_pos = 0;
    std::size_t end_pos = 0;
    std::size_t drone_pos = 0;
    double truck_time = 0.0;
    double drone_time = 0.0;
    double cost = 0.0;
    bool feasible = false;
};

// Every proper ring (i, j, k), i < k < j, with times summed edge by edge.
std::vector<RingTableEntry> ring_table(std::span<const NodeIndex> sequence, const CostModel& costs,
                                       const ConstraintSet& constraints);

// Partition DP over the full O(n^3) ring set; rings_enumerated counts the
// feasible proper rings examined.
EPResult naive_ep(std::span<const NodeIndex> sequence, const CostModel& costs, const ConstraintSet& constraints);

struct TspdOptimum {
    double cost = 0.0;
    std::vector<NodeIndex> sequence;
    std::vector<Ring> chain;
};

inline constexpr int kMaxExhaustiveNodes = 10;

// Global optimum over every customer order, each partitioned by naive_ep.
// Throws std::invalid_argument when the instance has more than 10 nodes.
TspdOptimum exhaustive_tspd(const Instance& instance);

// Shortest closed truck tour from the depot over all nodes (node_count <= 11).
double exhaustive_tsp_length(const CostModel& costs);

// Shortest truck path start -> end through every interior node (<= 9 interior).
double exhaustive_path_length(std::span<const NodeIndex> interior, NodeIndex start, NodeIndex end,
                              const CostModel& costs);

}  // namespace tspd::oracle

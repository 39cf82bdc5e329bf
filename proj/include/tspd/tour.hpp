#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tspd/instance.hpp"

namespace tspd {

// Closed tour: sequence starts and ends at the depot.
struct Tour {
    std::vector<NodeIndex> sequence;
    double length = 0.0;
};

// Open path with immutable first and last nodes.
struct OpenPath {
    std::vector<NodeIndex> sequence;
    double length = 0.0;
};

enum class TourMethod { farthest_insertion, nearest_neighbor, cheapest_insertion, random, two_opt_improved };

std::optional<TourMethod> parse_tour_method(const std::string& name);
std::string to_string(TourMethod method);

// Truck cost of walking the sequence.
double sequence_length(std::span<const NodeIndex> sequence, const CostModel& costs);

Tour construct_tour(const Instance& instance, TourMethod method = TourMethod::two_opt_improved,
                    std::uint64_t seed = 0);

// Farthest insertion with fixed ends over node_set (which must contain start and end).
// Throws std::invalid_argument when start == end, either endpoint is missing,
// or node_set has fewer than 2 nodes.
OpenPath construct_path(std::span<const NodeIndex> node_set, NodeIndex start, NodeIndex end,
                        const CostModel& costs);

// Same insertion procedure with no precondition on the endpoints; start == end
// yields a closed tour through the interior nodes.
std::vector<NodeIndex> farthest_insertion_between(std::span<const NodeIndex> interior, NodeIndex start,
                                                  NodeIndex end, const CostModel& costs);

// First-improvement 2-opt on a sequence whose first and last entries stay put.
// Returns the number of applied moves.
int two_opt(std::vector<NodeIndex>& sequence, const CostModel& costs);

// True when no 2-opt move improves the sequence by more than tol.
bool is_two_opt_local_optimum(std::span<const NodeIndex> sequence, const CostModel& costs, double tol = 1e-9);

}  // namespace tspd

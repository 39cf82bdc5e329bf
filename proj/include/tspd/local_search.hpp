#pragma once

#include <cstdint>
#include <span>

#include "tspd/partition.hpp"

namespace tspd {

struct LocalSearchStats {
    int sweeps = 0;
    int moves = 0;
    std::int64_t evaluations = 0;
};

inline constexpr double kImprovementEpsilon = 1e-9;

// Best-improvement descent over relocation, swap and segment reversal, each
// candidate sequence scored by a full exact partition. Sweeps until no move
// lowers the partition value by more than kImprovementEpsilon. Ties go to the
// first candidate in (operator, first index, second index) order.
//
// The first and last positions never move when fixed_endpoints is set or the
// sequence is closed (starts and ends at the same node).
EPResult tsp_ep_all(std::span<const NodeIndex> sequence, const PartitionContext& ctx, bool fixed_endpoints = true,
                    LocalSearchStats* stats = nullptr);

}  // namespace tspd

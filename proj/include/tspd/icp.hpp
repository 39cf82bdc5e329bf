#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "tspd/chain.hpp"
#include "tspd/instance.hpp"
#include "tspd/local_search.hpp"
#include "tspd/partition.hpp"
#include "tspd/tour.hpp"

namespace tspd {

struct IcpConfig {
    int max_size = kDefaultMaxChainletSize;
    TourMethod tour_method = TourMethod::two_opt_improved;
    std::uint64_t tour_seed = 0;
    // Called after every fresh TSP-ep-all run with the input path and its result.
    std::function<void(std::span<const NodeIndex> input_path, const EPResult& optimized)> on_fresh_call;
};

// Chainlets whose best improvement lies within this margin of the maximum
// count as tied; the one with the smallest first ring wins.
inline constexpr double kSelectionTieTolerance = 1e-9;

struct OptimizedEntry {
    std::vector<NodeIndex> sequence;  // the chainlet sequence this entry answers for
    std::vector<Ring> fragment;
    double fragment_cost = 0.0;
    double recorded_delta = 0.0;  // improvement measured when the entry was written
};

// Write-once store of TSP-ep-all results keyed by chainlet hash. Lookups
// compare the stored sequence, so a hash collision reads as a miss.
class OptimizedCache {
public:
    const OptimizedEntry* find(ChainletKey key, std::span<const NodeIndex> sequence) const;
    // Returns false when the key is already taken.
    bool insert(ChainletKey key, OptimizedEntry entry);
    std::size_t size() const { return entries_.size(); }
    std::size_t collisions() const { return collisions_; }

private:
    std::unordered_map<ChainletKey, OptimizedEntry, ChainletKeyHasher> entries_;
    mutable std::size_t collisions_ = 0;
};

struct IterationRecord {
    int iteration = 0;
    int chainlets = 0;
    int tsp_ep_all_calls = 0;  // fresh runs this iteration
    int cache_hits = 0;
    int predicted_items = 0;   // NICP only
    std::size_t selected_first_ring = 0;
    std::uint64_t selected_key = 0;
    double delta = 0.0;
    double total_cost = 0.0;
    bool accepted = false;
    // Cumulative subroutine time at the end of the iteration.
    double tour_ms = 0.0;
    double ep_ms = 0.0;
    double tsp_ep_all_ms = 0.0;
};

struct IcpTrace {
    std::vector<IterationRecord> iterations;
    double initial_tour_length = 0.0;
    double initial_cost = 0.0;
    double tour_ms = 0.0;
    double ep_ms = 0.0;
    double tsp_ep_all_ms = 0.0;
    double predictor_ms = 0.0;
    double total_ms = 0.0;
    std::int64_t tsp_ep_all_calls = 0;
    std::int64_t chainlet_size_sum = 0;  // over fresh runs
    std::int64_t predictor_batches = 0;
    std::int64_t predictor_items = 0;
    std::int64_t predictor_failures = 0;
    std::int64_t fallback_calls = 0;
    std::size_t cache_collisions = 0;

    int accepted_iterations() const;
    double mean_chainlet_size() const {
        return tsp_ep_all_calls ? static_cast<double>(chainlet_size_sum) / static_cast<double>(tsp_ep_all_calls) : 0.0;
    }
};

struct IcpResult {
    Chain chain;
    IcpTrace trace;
    Tour initial_tour;
};

// FI input path through the chainlet's interior nodes with its boundary nodes fixed.
std::vector<NodeIndex> chainlet_input_path(const Chainlet& chainlet, const CostModel& costs);

// Runs TSP-ep-all on the chainlet's input path and files the result under
// the chainlet key and under the optimized fragment's own key.
OptimizedEntry optimize_chainlet(const Chain& chain, const Chainlet& chainlet, std::span<const NodeIndex> input_path,
                                 const PartitionContext& ctx, OptimizedCache& cache, const IcpConfig& config,
                                 IcpTrace& trace);

// Index of the chainlet to update: largest value, near-ties to the smallest index.
std::size_t select_best(std::span<const double> deltas);

struct IterationOutcome {
    Chain chain;
    double delta = 0.0;
    bool improved = false;
};

IterationOutcome iterate_once(const Chain& chain, OptimizedCache& cache, const PartitionContext& ctx,
                              const IcpConfig& config, IcpTrace& trace);

// ICP from an existing chain (trace timing covers the loop only).
Chain improve_chain(Chain chain, const PartitionContext& ctx, const IcpConfig& config, IcpTrace& trace);

IcpResult solve_icp(const Instance& instance, const IcpConfig& config = {});

// One line per iteration: iteration, chainlets, calls, hits, delta, cost,
// cumulative tour / TSP-ep / TSP-ep-all milliseconds. Times print as 0 when
// include_timing is false so traces compare byte for byte.
void write_trace_csv(std::ostream& out, const IcpTrace& trace, bool include_timing = true);

}  // namespace tspd

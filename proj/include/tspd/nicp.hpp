#pragma once

#include <unordered_map>
#include <vector>

#include "tspd/icp.hpp"
#include "tspd/predictor.hpp"

namespace tspd {

struct PredictedEntry {
    std::vector<NodeIndex> sequence;    // chainlet sequence the prediction belongs to
    std::vector<NodeIndex> input_path;  // FI path handed to the predictor and later to TSP-ep-all
    double predicted_cost = 0.0;        // rescaled to instance units
};

class PredictedCache {
public:
    const PredictedEntry* find(ChainletKey key, std::span<const NodeIndex> sequence) const;
    bool insert(ChainletKey key, PredictedEntry entry);
    std::size_t size() const { return entries_.size(); }

private:
    std::unordered_map<ChainletKey, PredictedEntry, ChainletKeyHasher> entries_;
};

struct NicpConfig {
    IcpConfig icp;
};

// Predictor-guided ICP. Each iteration predicts every chainlet with no
// confirmed or predicted result (one batch), confirms the most promising
// chainlet with a real TSP-ep-all run, and splices only confirmed strict
// improvements. When the best candidate is already confirmed without
// improvement, the most promising unconfirmed chainlet is confirmed instead.
// Stops once every current chainlet is confirmed and none improves.
// Predictor failures fall back to direct TSP-ep-all runs for that batch.
Chain improve_chain_nicp(Chain chain, const PartitionContext& ctx, CostPredictor& predictor, const NicpConfig& config,
                         std::optional<double> flying_range_pct, IcpTrace& trace);

IcpResult solve_nicp(const Instance& instance, CostPredictor& predictor, const NicpConfig& config = {});

}  // namespace tspd

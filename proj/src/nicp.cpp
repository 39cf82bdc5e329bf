#include "tspd/nicp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>

namespace tspd {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

const PredictedEntry* PredictedCache::find(ChainletKey key, std::span<const NodeIndex> sequence) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    if (!std::equal(it->second.sequence.begin(), it->second.sequence.end(), sequence.begin(), sequence.end())) {
        return nullptr;
    }
    return &it->second;
}

bool PredictedCache::insert(ChainletKey key, PredictedEntry entry) {
    return entries_.emplace(key, std::move(entry)).second;
}

Chain improve_chain_nicp(Chain chain, const PartitionContext& ctx, CostPredictor& predictor, const NicpConfig& config,
                         std::optional<double> flying_range_pct, IcpTrace& trace) {
    const auto t_loop = Clock::now();
    const IcpConfig& icp = config.icp;
    const double f_prime = range_feature(flying_range_pct);
    OptimizedCache optimized;
    PredictedCache predicted;

    for (;;) {
        IterationRecord rec;
        rec.iteration = static_cast<int>(trace.iterations.size()) + 1;
        const auto chainlets = group(chain, icp.max_size);
        const std::size_t m = chainlets.size();
        rec.chainlets = static_cast<int>(m);
        const auto& rings = chain.rings();

        std::vector<double> current(m), deltas(m);
        std::vector<bool> confirmed(m, false);
        std::vector<const OptimizedEntry*> entries(m, nullptr);
        std::vector<std::vector<NodeIndex>> paths(m);
        std::deque<OptimizedEntry> fresh;
        std::vector<std::size_t> pending;

        for (std::size_t j = 0; j < m; ++j) {
            const auto& c = chainlets[j];
            const auto key = chainlet_key(c);
            current[j] = ring_cost(std::span(rings).subspan(c.first_ring, c.ring_count()));
            if (const auto* hit = optimized.find(key, c.node_sequence)) {
                ++rec.cache_hits;
                confirmed[j] = true;
                entries[j] = hit;
                deltas[j] = current[j] - hit->fragment_cost;
            } else if (const auto* guess = predicted.find(key, c.node_sequence)) {
                paths[j] = guess->input_path;
                deltas[j] = current[j] - guess->predicted_cost;
            } else {
                paths[j] = chainlet_input_path(c, ctx.costs());
                pending.push_back(j);
            }
        }

        if (!pending.empty()) {
            std::vector<ChainletGraph> graphs;
            graphs.reserve(pending.size());
            for (std::size_t j : pending) graphs.push_back(make_chainlet_graph(paths[j], ctx.costs(), f_prime));
            std::vector<double> normalized;
            bool ok = true;
            const auto t = Clock::now();
            try {
                normalized = predictor.predict(graphs);
                if (normalized.size() != graphs.size()) throw PredictorError("predictor returned the wrong count");
                for (double y : normalized) {
                    if (!std::isfinite(y) || y < 0.0) throw PredictorError("invalid predicted cost");
                }
            } catch (const std::exception&) {
                ok = false;
            }
            trace.predictor_ms += ms_since(t);
            ++trace.predictor_batches;
            if (ok) {
                trace.predictor_items += static_cast<std::int64_t>(pending.size());
                rec.predicted_items = static_cast<int>(pending.size());
                for (std::size_t p = 0; p < pending.size(); ++p) {
                    const std::size_t j = pending[p];
                    PredictedEntry entry;
                    entry.sequence = chainlets[j].node_sequence;
                    entry.input_path = paths[j];
                    entry.predicted_cost = rescale_prediction(normalized[p], graphs[p].scale);
                    deltas[j] = current[j] - entry.predicted_cost;
                    predicted.insert(chainlet_key(chainlets[j]), std::move(entry));
                }
            } else {
                ++trace.predictor_failures;
                for (std::size_t j : pending) {
                    fresh.push_back(optimize_chainlet(chain, chainlets[j], paths[j], ctx, optimized, icp, trace));
                    ++trace.fallback_calls;
                    ++rec.tsp_ep_all_calls;
                    entries[j] = &fresh.back();
                    confirmed[j] = true;
                    deltas[j] = current[j] - fresh.back().fragment_cost;
                }
            }
        }

        std::size_t k = select_best(deltas);
        if (confirmed[k] && deltas[k] <= kImprovementEpsilon) {
            std::vector<std::size_t> open;
            std::vector<double> open_deltas;
            for (std::size_t j = 0; j < m; ++j) {
                if (!confirmed[j]) {
                    open.push_back(j);
                    open_deltas.push_back(deltas[j]);
                }
            }
            if (open.empty()) {
                rec.selected_first_ring = chainlets[k].first_ring;
                rec.selected_key = chainlet_key(chainlets[k]).hash64;
                rec.delta = deltas[k];
                rec.total_cost = chain.total_cost();
                rec.tour_ms = trace.tour_ms;
                rec.ep_ms = trace.ep_ms;
                rec.tsp_ep_all_ms = trace.tsp_ep_all_ms;
                trace.iterations.push_back(rec);
                break;
            }
            k = open[select_best(open_deltas)];
        }

        const auto& chosen = chainlets[k];
        if (!confirmed[k]) {
            fresh.push_back(optimize_chainlet(chain, chosen, paths[k], ctx, optimized, icp, trace));
            ++rec.tsp_ep_all_calls;
            entries[k] = &fresh.back();
            deltas[k] = current[k] - fresh.back().fragment_cost;
        }
        rec.selected_first_ring = chosen.first_ring;
        rec.selected_key = chainlet_key(chosen).hash64;
        rec.delta = deltas[k];
        if (deltas[k] > kImprovementEpsilon) {
            chain = splice(chain, chosen.first_ring, chosen.last_ring, entries[k]->fragment);
            rec.accepted = true;
        }
        rec.total_cost = chain.total_cost();
        rec.tour_ms = trace.tour_ms;
        rec.ep_ms = trace.ep_ms;
        rec.tsp_ep_all_ms = trace.tsp_ep_all_ms;
        trace.iterations.push_back(rec);
    }
    trace.cache_collisions = optimized.collisions();
    trace.total_ms += ms_since(t_loop);
    return chain;
}

IcpResult solve_nicp(const Instance& instance, CostPredictor& predictor, const NicpConfig& config) {
    IcpResult result;
    const auto t0 = Clock::now();
    const PartitionContext ctx(instance);

    auto t = Clock::now();
    result.initial_tour = construct_tour(instance, config.icp.tour_method, config.icp.tour_seed);
    result.trace.tour_ms = ms_since(t);
    result.trace.initial_tour_length = result.initial_tour.length;

    t = Clock::now();
    auto initial = exact_partition(result.initial_tour.sequence, ctx);
    result.trace.ep_ms = ms_since(t);
    Chain chain(std::move(initial.chain));
    result.trace.initial_cost = chain.total_cost();

    result.chain = improve_chain_nicp(std::move(chain), ctx, predictor, config, instance.flying_range_pct(),
                                      result.trace);
    result.trace.total_ms = ms_since(t0);
    return result;
}

}  // namespace tspd

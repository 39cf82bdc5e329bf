#include "tspd/icp.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <iomanip>
#include <ostream>

namespace tspd {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

const OptimizedEntry* OptimizedCache::find(ChainletKey key, std::span<const NodeIndex> sequence) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    if (!std::equal(it->second.sequence.begin(), it->second.sequence.end(), sequence.begin(), sequence.end())) {
        ++collisions_;
        return nullptr;
    }
    return &it->second;
}

bool OptimizedCache::insert(ChainletKey key, OptimizedEntry entry) {
    return entries_.emplace(key, std::move(entry)).second;
}

int IcpTrace::accepted_iterations() const {
    return static_cast<int>(std::count_if(iterations.begin(), iterations.end(),
                                          [](const IterationRecord& r) { return r.accepted; }));
}

std::vector<NodeIndex> chainlet_input_path(const Chainlet& chainlet, const CostModel& costs) {
    const auto& seq = chainlet.node_sequence;
    std::span<const NodeIndex> interior(seq.data() + 1, seq.size() - 2);
    return farthest_insertion_between(interior, chainlet.start(), chainlet.end(), costs);
}

OptimizedEntry optimize_chainlet(const Chain& chain, const Chainlet& chainlet, std::span<const NodeIndex> input_path,
                                 const PartitionContext& ctx, OptimizedCache& cache, const IcpConfig& config,
                                 IcpTrace& trace) {
    const auto t0 = Clock::now();
    EPResult optimized = tsp_ep_all(input_path, ctx, true);
    trace.tsp_ep_all_ms += ms_since(t0);
    ++trace.tsp_ep_all_calls;
    trace.chainlet_size_sum += chainlet.size;
    if (config.on_fresh_call) config.on_fresh_call(input_path, optimized);

    const auto& rings = chain.rings();
    const double current =
        ring_cost(std::span(rings).subspan(chainlet.first_ring, chainlet.ring_count()));

    OptimizedEntry entry;
    entry.sequence = chainlet.node_sequence;
    entry.fragment = std::move(optimized.chain);
    entry.fragment_cost = ring_cost(entry.fragment);
    entry.recorded_delta = current - entry.fragment_cost;
    cache.insert(chainlet_key(chainlet), entry);

    OptimizedEntry self;
    self.sequence = ring_path(entry.fragment);
    self.fragment = entry.fragment;
    self.fragment_cost = entry.fragment_cost;
    self.recorded_delta = 0.0;
    const auto self_key = sequence_key(self.sequence);
    cache.insert(self_key, std::move(self));
    return entry;
}

std::size_t select_best(std::span<const double> deltas) {
    const double top = *std::max_element(deltas.begin(), deltas.end());
    for (std::size_t j = 0; j < deltas.size(); ++j) {
        if (deltas[j] >= top - kSelectionTieTolerance) return j;
    }
    return 0;
}

IterationOutcome iterate_once(const Chain& chain, OptimizedCache& cache, const PartitionContext& ctx,
                              const IcpConfig& config, IcpTrace& trace) {
    IterationRecord rec;
    rec.iteration = static_cast<int>(trace.iterations.size()) + 1;
    const auto chainlets = group(chain, config.max_size);
    rec.chainlets = static_cast<int>(chainlets.size());

    const auto& rings = chain.rings();
    std::deque<OptimizedEntry> fresh;
    std::vector<const OptimizedEntry*> entries(chainlets.size(), nullptr);
    std::vector<double> deltas(chainlets.size(), 0.0);
    for (std::size_t j = 0; j < chainlets.size(); ++j) {
        const auto& c = chainlets[j];
        const double current = ring_cost(std::span(rings).subspan(c.first_ring, c.ring_count()));
        const OptimizedEntry* hit = cache.find(chainlet_key(c), c.node_sequence);
        if (hit) {
            ++rec.cache_hits;
        } else {
            const auto path = chainlet_input_path(c, ctx.costs());
            fresh.push_back(optimize_chainlet(chain, c, path, ctx, cache, config, trace));
            ++rec.tsp_ep_all_calls;
            hit = &fresh.back();
        }
        entries[j] = hit;
        // Improvement against the chainlet as it currently stands.
        deltas[j] = current - hit->fragment_cost;
    }

    IterationOutcome outcome;
    const std::size_t k = select_best(deltas);
    const auto& chosen = chainlets[k];
    rec.selected_first_ring = chosen.first_ring;
    rec.selected_key = chainlet_key(chosen).hash64;
    rec.delta = deltas[k];
    if (deltas[k] > kImprovementEpsilon) {
        outcome.chain = splice(chain, chosen.first_ring, chosen.last_ring, entries[k]->fragment);
        outcome.improved = true;
        rec.accepted = true;
    } else {
        outcome.chain = chain;
    }
    outcome.delta = deltas[k];
    rec.total_cost = outcome.chain.total_cost();
    rec.tour_ms = trace.tour_ms;
    rec.ep_ms = trace.ep_ms;
    rec.tsp_ep_all_ms = trace.tsp_ep_all_ms;
    trace.iterations.push_back(rec);
    trace.cache_collisions = cache.collisions();
    return outcome;
}

Chain improve_chain(Chain chain, const PartitionContext& ctx, const IcpConfig& config, IcpTrace& trace) {
    const auto t0 = Clock::now();
    OptimizedCache cache;
    for (;;) {
        auto outcome = iterate_once(chain, cache, ctx, config, trace);
        if (!outcome.improved) break;
        chain = std::move(outcome.chain);
    }
    trace.total_ms += ms_since(t0);
    return chain;
}

IcpResult solve_icp(const Instance& instance, const IcpConfig& config) {
    IcpResult result;
    const auto t0 = Clock::now();
    const PartitionContext ctx(instance);

    auto t = Clock::now();
    result.initial_tour = construct_tour(instance, config.tour_method, config.tour_seed);
    result.trace.tour_ms = ms_since(t);
    result.trace.initial_tour_length = result.initial_tour.length;

    t = Clock::now();
    auto initial = exact_partition(result.initial_tour.sequence, ctx);
    result.trace.ep_ms = ms_since(t);
    Chain chain(std::move(initial.chain));
    result.trace.initial_cost = chain.total_cost();

    result.chain = improve_chain(std::move(chain), ctx, config, result.trace);
    result.trace.total_ms = ms_since(t0);
    return result;
}

void write_trace_csv(std::ostream& out, const IcpTrace& trace, bool include_timing) {
    out << "iteration,chainlets,calls,cache_hits,predicted,delta,cost,accepted,tour_ms,tsp_ep_ms,tsp_ep_all_ms\n";
    const auto old_flags = out.flags();
    const auto old_precision = out.precision();
    out << std::setprecision(17);
    for (const auto& r : trace.iterations) {
        out << r.iteration << ',' << r.chainlets << ',' << r.tsp_ep_all_calls << ',' << r.cache_hits << ','
            << r.predicted_items << ',' << r.delta << ',' << r.total_cost << ',' << (r.accepted ? 1 : 0) << ',';
        if (include_timing) {
            out << std::setprecision(6) << r.tour_ms << ',' << r.ep_ms << ',' << r.tsp_ep_all_ms
                << std::setprecision(17) << '\n';
        } else {
            out << "0,0,0\n";
        }
    }
    out.flags(old_flags);
    out.precision(old_precision);
}

}  // namespace tspd

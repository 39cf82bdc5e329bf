#include "tspd/partition.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace tspd {

std::vector<NodeIndex> Ring::interior_truck() const {
    std::vector<NodeIndex> out;
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
        if (!drone || path[i] != *drone) out.push_back(path[i]);
    }
    return out;
}

int Ring::size() const {
    const auto n = static_cast<int>(path.size());
    return (n > 1 && path.front() == path.back()) ? n - 1 : n;
}

ConstraintSet ConstraintSet::from_instance(const Instance& instance) {
    ConstraintSet cs;
    cs.range_limit = instance.range_limit();
    cs.eligible.resize(static_cast<std::size_t>(instance.node_count()));
    for (NodeIndex v = 0; v < instance.node_count(); ++v) cs.eligible[static_cast<std::size_t>(v)] = instance.is_eligible(v);
    return cs;
}

ConstraintSet ConstraintSet::unrestricted(int node_count) {
    ConstraintSet cs;
    cs.eligible.assign(static_cast<std::size_t>(node_count), true);
    if (node_count > 0) cs.eligible[0] = false;
    return cs;
}

RangeIndex::RangeIndex(const CostModel& costs, double range_limit) : n_(costs.size()), limit_(range_limit) {
    const auto n = static_cast<std::size_t>(n_);
    sorted_dist_.resize(n * n);
    rank_.resize(n * n);
    std::vector<NodeIndex> order(n);
    for (NodeIndex k = 0; k < n_; ++k) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](NodeIndex a, NodeIndex b) { return costs.distance(k, a) < costs.distance(k, b); });
        for (std::size_t r = 0; r < n; ++r) {
            sorted_dist_[idx(k, static_cast<NodeIndex>(r))] = costs.distance(k, order[r]);
            rank_[idx(k, order[r])] = static_cast<int>(r);
        }
    }
}

int RangeIndex::admissible_count(NodeIndex k, double launch_leg) const {
    const auto row = sorted_dist_.begin() + static_cast<std::ptrdiff_t>(idx(k, 0));
    // launch_leg + x <= limit is monotone in x, so the admissible set is a prefix.
    const auto it = std::partition_point(row, row + n_, [&](double x) { return launch_leg + x <= limit_; });
    return static_cast<int>(it - row);
}

RangeIndex preprocess_range(const CostModel& costs, double range_limit) { return RangeIndex(costs, range_limit); }

PartitionContext::PartitionContext(const CostModel& costs, ConstraintSet constraints)
    : costs_(&costs), constraints_(std::move(constraints)) {
    if (constraints_.eligible.size() != static_cast<std::size_t>(costs.size())) {
        throw std::invalid_argument("constraint set does not match the cost model");
    }
    if (constraints_.range_limit) range_.emplace(costs, *constraints_.range_limit);
}

PartitionContext::PartitionContext(const Instance& instance)
    : PartitionContext(instance.costs(), ConstraintSet::from_instance(instance)) {}

Ring make_ring(std::span<const NodeIndex> seq, std::size_t i, std::size_t j, std::optional<std::size_t> k,
               const CostModel& costs) {
    Ring ring;
    ring.path.assign(seq.begin() + static_cast<std::ptrdiff_t>(i), seq.begin() + static_cast<std::ptrdiff_t>(j) + 1);
    if (!k) {
        ring.truck_time = 0.0;
        for (std::size_t l = i; l < j; ++l) ring.truck_time += costs.truck(seq[l], seq[l + 1]);
        ring.cost = ring.truck_time;
        return ring;
    }
    ring.drone = seq[*k];
    NodeIndex prev = seq[i];
    for (std::size_t l = i + 1; l <= j; ++l) {
        if (l == *k) continue;
        ring.truck_time += costs.truck(prev, seq[l]);
        prev = seq[l];
    }
    ring.drone_time = costs.drone(seq[i], seq[*k]) + costs.drone(seq[*k], seq[j]);
    ring.cost = std::max(ring.truck_time, ring.drone_time);
    return ring;
}

namespace {

struct Backpointer {
    std::size_t from = 0;
    std::ptrdiff_t drone_pos = -1;
};

template <bool Reconstruct>
EPResult partition_impl(std::span<const NodeIndex> seq, const PartitionContext& ctx) {
    const std::size_t n = seq.size();
    if (n < 2) throw std::invalid_argument("sequence must have at least 2 positions");
    const CostModel& costs = ctx.costs();
    const ConstraintSet& cs = ctx.constraints();
    const RangeIndex* range = ctx.range_index();

    std::vector<double> prefix(n, 0.0);  // prefix[l] = S^t(0, l)
    for (std::size_t l = 1; l < n; ++l) prefix[l] = prefix[l - 1] + costs.truck(seq[l - 1], seq[l]);

    std::vector<double> value(n, std::numeric_limits<double>::infinity());
    std::vector<Backpointer> back;
    if constexpr (Reconstruct) back.resize(n);
    value[0] = 0.0;
    std::int64_t enumerated = 0;

    auto relax = [&](std::size_t target, double candidate, std::size_t from, std::ptrdiff_t k) {
        if (candidate < value[target]) {
            value[target] = candidate;
            if constexpr (Reconstruct) back[target] = {from, k};
        }
    };

    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double base_value = value[i];
        const NodeIndex start = seq[i];
        relax(i + 1, base_value + costs.truck(start, seq[i + 1]), i, -1);
        for (std::size_t k = i + 1; k + 1 < n; ++k) {
            const NodeIndex drone = seq[k];
            if (!cs.is_eligible(drone)) continue;
            int admissible = 0;
            if (range) {
                admissible = range->admissible_count(drone, costs.distance(start, drone));
                if (admissible == 0) continue;
            }
            const double launch = costs.drone(start, drone);
            // C^t at j = k + 1, then extended one truck edge per step.
            double truck_time = (prefix[k - 1] - prefix[i]) + costs.truck(seq[k - 1], seq[k + 1]);
            for (std::size_t j = k + 1; j < n; ++j) {
                if (j > k + 1) truck_time += costs.truck(seq[j - 1], seq[j]);
                if (range && range->rank(drone, seq[j]) >= admissible) continue;
                const double drone_time = launch + costs.drone(drone, seq[j]);
                ++enumerated;
                relax(j, base_value + std::max(truck_time, drone_time), i, static_cast<std::ptrdiff_t>(k));
                if (drone_time <= truck_time) break;
            }
        }
    }

    EPResult result;
    result.value = value[n - 1];
    result.rings_enumerated = enumerated;
    if constexpr (Reconstruct) {
        std::size_t v = n - 1;
        while (v > 0) {
            const auto bp = back[v];
            std::optional<std::size_t> k;
            if (bp.drone_pos >= 0) k = static_cast<std::size_t>(bp.drone_pos);
            result.chain.push_back(make_ring(seq, bp.from, v, k, costs));
            v = bp.from;
        }
        std::reverse(result.chain.begin(), result.chain.end());
    }
    return result;
}

}  // namespace

EPResult exact_partition(std::span<const NodeIndex> sequence, const PartitionContext& ctx) {
    return partition_impl<true>(sequence, ctx);
}

double exact_partition_value(std::span<const NodeIndex> sequence, const PartitionContext& ctx) {
    return partition_impl<false>(sequence, ctx).value;
}

}  // namespace tspd

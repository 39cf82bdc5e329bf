#include "tspd/oracle.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace tspd::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double truck_sum(std::span<const NodeIndex> seq, std::size_t from, std::size_t to, const CostModel& costs) {
    double s = 0.0;
    for (std::size_t l = from; l < to; ++l) s += costs.truck(seq[l], seq[l + 1]);
    return s;
}

}  // namespace

std::vector<RingTableEntry> ring_table(std::span<const NodeIndex> seq, const CostModel& costs,
                                       const ConstraintSet& constraints) {
    std::vector<RingTableEntry> table;
    const std::size_t n = seq.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 2; j < n; ++j) {
            for (std::size_t k = i + 1; k < j; ++k) {
                RingTableEntry e;
                e.start_pos = i;
                e.end_pos = j;
                e.drone_pos = k;
                e.truck_time = truck_sum(seq, i, k - 1, costs) + truck_sum(seq, k + 1, j, costs) +
                               costs.truck(seq[k - 1], seq[k + 1]);
                e.drone_time = costs.drone(seq[i], seq[k]) + costs.drone(seq[k], seq[j]);
                e.cost = std::max(e.truck_time, e.drone_time);
                e.feasible = constraints.is_eligible(seq[k]) && constraints.flight_feasible(costs, seq[i], seq[k], seq[j]);
                table.push_back(e);
            }
        }
    }
    return table;
}

EPResult naive_ep(std::span<const NodeIndex> seq, const CostModel& costs, const ConstraintSet& constraints) {
    const std::size_t n = seq.size();
    if (n < 2) throw std::invalid_argument("sequence must have at least 2 positions");

    // best[i][j]: cheapest single ring covering positions i..j, drone position (or -1).
    std::vector<std::vector<double>> best(n, std::vector<double>(n, kInf));
    std::vector<std::vector<long>> best_k(n, std::vector<long>(n, -1));
    EPResult result;
    for (std::size_t i = 0; i + 1 < n; ++i) best[i][i + 1] = costs.truck(seq[i], seq[i + 1]);
    for (const auto& e : ring_table(seq, costs, constraints)) {
        if (!e.feasible) continue;
        ++result.rings_enumerated;
        if (e.cost < best[e.start_pos][e.end_pos]) {
            best[e.start_pos][e.end_pos] = e.cost;
            best_k[e.start_pos][e.end_pos] = static_cast<long>(e.drone_pos);
        }
    }

    std::vector<double> value(n, kInf);
    std::vector<std::size_t> from(n, 0);
    value[0] = 0.0;
    for (std::size_t v = 1; v < n; ++v) {
        for (std::size_t u = 0; u < v; ++u) {
            const double c = value[u] + best[u][v];
            if (c < value[v]) {
                value[v] = c;
                from[v] = u;
            }
        }
    }
    result.value = value[n - 1];

    for (std::size_t v = n - 1; v > 0; v = from[v]) {
        const std::size_t u = from[v];
        Ring ring;
        ring.path.assign(seq.begin() + static_cast<std::ptrdiff_t>(u), seq.begin() + static_cast<std::ptrdiff_t>(v) + 1);
        if (best_k[u][v] < 0) {
            ring.truck_time = ring.cost = best[u][v];
        } else {
            const auto k = static_cast<std::size_t>(best_k[u][v]);
            ring.drone = seq[k];
            ring.truck_time = truck_sum(seq, u, k - 1, costs) + truck_sum(seq, k + 1, v, costs) +
                              costs.truck(seq[k - 1], seq[k + 1]);
            ring.drone_time = costs.drone(seq[u], seq[k]) + costs.drone(seq[k], seq[v]);
            ring.cost = best[u][v];
        }
        result.chain.push_back(std::move(ring));
    }
    std::reverse(result.chain.begin(), result.chain.end());
    return result;
}

TspdOptimum exhaustive_tspd(const Instance& instance) {
    const int n = instance.node_count();
    if (n > kMaxExhaustiveNodes) throw std::invalid_argument("exhaustive search limited to 10 nodes");
    const CostModel& costs = instance.costs();
    const ConstraintSet cs = ConstraintSet::from_instance(instance);

    std::vector<NodeIndex> customers(static_cast<std::size_t>(n - 1));
    std::iota(customers.begin(), customers.end(), 1);
    TspdOptimum best;
    best.cost = kInf;
    std::vector<NodeIndex> seq(static_cast<std::size_t>(n + 1), 0);
    do {
        // A sequence and its reversal partition to the same value on symmetric costs.
        if (customers.size() >= 2 && customers.front() > customers.back()) continue;
        std::copy(customers.begin(), customers.end(), seq.begin() + 1);
        auto ep = naive_ep(seq, costs, cs);
        if (ep.value < best.cost) {
            best.cost = ep.value;
            best.sequence = seq;
            best.chain = std::move(ep.chain);
        }
    } while (std::next_permutation(customers.begin(), customers.end()));
    return best;
}

double exhaustive_tsp_length(const CostModel& costs) {
    const int n = costs.size();
    if (n > 11) throw std::invalid_argument("exhaustive tour limited to 11 nodes");
    std::vector<NodeIndex> customers(static_cast<std::size_t>(n - 1));
    std::iota(customers.begin(), customers.end(), 1);
    double best = kInf;
    do {
        double len = costs.truck(0, customers.front()) + costs.truck(customers.back(), 0);
        for (std::size_t i = 1; i < customers.size(); ++i) len += costs.truck(customers[i - 1], customers[i]);
        best = std::min(best, len);
    } while (std::next_permutation(customers.begin(), customers.end()));
    return best;
}

double exhaustive_path_length(std::span<const NodeIndex> interior, NodeIndex start, NodeIndex end,
                              const CostModel& costs) {
    std::vector<NodeIndex> order(interior.begin(), interior.end());
    if (order.size() > 9) throw std::invalid_argument("exhaustive path limited to 9 interior nodes");
    std::sort(order.begin(), order.end());
    if (order.empty()) return costs.truck(start, end);
    double best = kInf;
    do {
        double len = costs.truck(start, order.front()) + costs.truck(order.back(), end);
        for (std::size_t i = 1; i < order.size(); ++i) len += costs.truck(order[i - 1], order[i]);
        best = std::min(best, len);
    } while (std::next_permutation(order.begin(), order.end()));
    return best;
}

}  // namespace tspd::oracle

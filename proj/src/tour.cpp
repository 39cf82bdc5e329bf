#include "tspd/tour.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <stdexcept>

namespace tspd {

std::optional<TourMethod> parse_tour_method(const std::string& name) {
    if (name == "farthest_insertion" || name == "fi") return TourMethod::farthest_insertion;
    if (name == "nearest_neighbor" || name == "nn") return TourMethod::nearest_neighbor;
    if (name == "cheapest_insertion" || name == "ci") return TourMethod::cheapest_insertion;
    if (name == "random") return TourMethod::random;
    if (name == "two_opt_improved" || name == "2opt") return TourMethod::two_opt_improved;
    return std::nullopt;
}

std::string to_string(TourMethod method) {
    switch (method) {
        case TourMethod::farthest_insertion: return "farthest_insertion";
        case TourMethod::nearest_neighbor: return "nearest_neighbor";
        case TourMethod::cheapest_insertion: return "cheapest_insertion";
        case TourMethod::random: return "random";
        case TourMethod::two_opt_improved: return "two_opt_improved";
    }
    return "unknown";
}

double sequence_length(std::span<const NodeIndex> sequence, const CostModel& costs) {
    double total = 0.0;
    for (std::size_t i = 1; i < sequence.size(); ++i) total += costs.truck(sequence[i - 1], sequence[i]);
    return total;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Cheapest slot for v among consecutive pairs of seq; ties go to the earliest slot.
std::pair<std::size_t, double> best_slot(const std::vector<NodeIndex>& seq, NodeIndex v, const CostModel& costs) {
    std::size_t best = 0;
    double best_cost = kInf;
    for (std::size_t s = 0; s + 1 < seq.size(); ++s) {
        const double c = costs.truck(seq[s], v) + costs.truck(v, seq[s + 1]) - costs.truck(seq[s], seq[s + 1]);
        if (c < best_cost) {
            best_cost = c;
            best = s;
        }
    }
    return {best, best_cost};
}

std::vector<NodeIndex> sorted_unique(std::span<const NodeIndex> nodes) {
    std::vector<NodeIndex> out(nodes.begin(), nodes.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<NodeIndex> nearest_neighbor_tour(const CostModel& costs) {
    const int n = costs.size();
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    std::vector<NodeIndex> seq{0};
    used[0] = true;
    NodeIndex cur = 0;
    for (int step = 1; step < n; ++step) {
        NodeIndex next = -1;
        double best = kInf;
        for (NodeIndex v = 1; v < n; ++v) {
            if (!used[static_cast<std::size_t>(v)] && costs.truck(cur, v) < best) {
                best = costs.truck(cur, v);
                next = v;
            }
        }
        used[static_cast<std::size_t>(next)] = true;
        seq.push_back(next);
        cur = next;
    }
    seq.push_back(0);
    return seq;
}

std::vector<NodeIndex> cheapest_insertion_tour(const CostModel& costs) {
    const int n = costs.size();
    std::vector<NodeIndex> seq{0, 0};
    std::vector<NodeIndex> pending;
    for (NodeIndex v = 1; v < n; ++v) pending.push_back(v);
    while (!pending.empty()) {
        std::size_t pick = 0;
        std::size_t slot = 0;
        double best = kInf;
        for (std::size_t p = 0; p < pending.size(); ++p) {
            auto [s, c] = best_slot(seq, pending[p], costs);
            if (c < best) {
                best = c;
                pick = p;
                slot = s;
            }
        }
        seq.insert(seq.begin() + static_cast<std::ptrdiff_t>(slot) + 1, pending[pick]);
        pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    return seq;
}

std::vector<NodeIndex> random_tour(int n, std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    std::vector<NodeIndex> customers;
    for (NodeIndex v = 1; v < n; ++v) customers.push_back(v);
    // Fisher-Yates over raw engine output, for identical results across standard libraries.
    for (std::size_t i = customers.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(engine() % i);
        std::swap(customers[i - 1], customers[j]);
    }
    std::vector<NodeIndex> seq{0};
    seq.insert(seq.end(), customers.begin(), customers.end());
    seq.push_back(0);
    return seq;
}

}  // namespace

std::vector<NodeIndex> farthest_insertion_between(std::span<const NodeIndex> interior, NodeIndex start, NodeIndex end,
                                                  const CostModel& costs) {
    std::vector<NodeIndex> seq{start, end};
    std::vector<NodeIndex> pending = sorted_unique(interior);
    std::erase_if(pending, [&](NodeIndex v) { return v == start || v == end; });
    // Distance from each pending node to the nearest node already on the path.
    std::vector<double> near(pending.size());
    for (std::size_t p = 0; p < pending.size(); ++p) {
        near[p] = std::min(costs.truck(pending[p], start), costs.truck(pending[p], end));
    }
    while (!pending.empty()) {
        std::size_t pick = 0;
        for (std::size_t p = 1; p < pending.size(); ++p) {
            if (near[p] > near[pick]) pick = p;
        }
        const NodeIndex v = pending[pick];
        const auto slot = best_slot(seq, v, costs).first;
        seq.insert(seq.begin() + static_cast<std::ptrdiff_t>(slot) + 1, v);
        pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(pick));
        near.erase(near.begin() + static_cast<std::ptrdiff_t>(pick));
        for (std::size_t p = 0; p < pending.size(); ++p) near[p] = std::min(near[p], costs.truck(pending[p], v));
    }
    return seq;
}

OpenPath construct_path(std::span<const NodeIndex> node_set, NodeIndex start, NodeIndex end, const CostModel& costs) {
    const auto nodes = sorted_unique(node_set);
    if (nodes.size() < 2) throw std::invalid_argument("path needs at least 2 nodes");
    if (start == end) throw std::invalid_argument("path endpoints must differ");
    if (!std::binary_search(nodes.begin(), nodes.end(), start) || !std::binary_search(nodes.begin(), nodes.end(), end)) {
        throw std::invalid_argument("path endpoints must belong to the node set");
    }
    OpenPath path;
    path.sequence = farthest_insertion_between(nodes, start, end, costs);
    path.length = sequence_length(path.sequence, costs);
    return path;
}

int two_opt(std::vector<NodeIndex>& seq, const CostModel& costs) {
    constexpr double kGainTol = 1e-10;
    int moves = 0;
    const std::size_t n = seq.size();
    if (n < 4) return 0;
    bool improved = true;
    while (improved) {
        improved = false;
        for (std::size_t i = 0; i + 3 < n; ++i) {
            for (std::size_t j = i + 2; j + 1 < n; ++j) {
                const NodeIndex a = seq[i], b = seq[i + 1], c = seq[j], d = seq[j + 1];
                const double gain = costs.truck(a, b) + costs.truck(c, d) - costs.truck(a, c) - costs.truck(b, d);
                if (gain > kGainTol) {
                    std::reverse(seq.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                                 seq.begin() + static_cast<std::ptrdiff_t>(j) + 1);
                    ++moves;
                    improved = true;
                }
            }
        }
    }
    return moves;
}

bool is_two_opt_local_optimum(std::span<const NodeIndex> seq, const CostModel& costs, double tol) {
    const std::size_t n = seq.size();
    for (std::size_t i = 0; i + 3 < n; ++i) {
        for (std::size_t j = i + 2; j + 1 < n; ++j) {
            const double gain = costs.truck(seq[i], seq[i + 1]) + costs.truck(seq[j], seq[j + 1]) -
                                costs.truck(seq[i], seq[j]) - costs.truck(seq[i + 1], seq[j + 1]);
            if (gain > tol) return false;
        }
    }
    return true;
}

Tour construct_tour(const Instance& instance, TourMethod method, std::uint64_t seed) {
    const auto& costs = instance.costs();
    const int n = instance.node_count();
    Tour tour;
    switch (method) {
        case TourMethod::nearest_neighbor:
            tour.sequence = nearest_neighbor_tour(costs);
            break;
        case TourMethod::cheapest_insertion:
            tour.sequence = cheapest_insertion_tour(costs);
            break;
        case TourMethod::random:
            tour.sequence = random_tour(n, seed);
            break;
        case TourMethod::farthest_insertion:
        case TourMethod::two_opt_improved: {
            std::vector<NodeIndex> customers;
            for (NodeIndex v = 1; v < n; ++v) customers.push_back(v);
            tour.sequence = farthest_insertion_between(customers, 0, 0, costs);
            if (method == TourMethod::two_opt_improved) two_opt(tour.sequence, costs);
            break;
        }
    }
    tour.length = sequence_length(tour.sequence, costs);
    return tour;
}

}  // namespace tspd

#include "tspd/local_search.hpp"

#include <algorithm>
#include <vector>

namespace tspd {

namespace {

enum class Move { relocate, swap, reverse };

struct Candidate {
    Move move = Move::relocate;
    std::size_t a = 0;
    std::size_t b = 0;
};

void apply_move(std::vector<NodeIndex>& seq, const Candidate& c) {
    const auto first = seq.begin();
    switch (c.move) {
        case Move::relocate:
            if (c.a < c.b) {
                std::rotate(first + static_cast<std::ptrdiff_t>(c.a), first + static_cast<std::ptrdiff_t>(c.a) + 1,
                            first + static_cast<std::ptrdiff_t>(c.b) + 1);
            } else {
                std::rotate(first + static_cast<std::ptrdiff_t>(c.b), first + static_cast<std::ptrdiff_t>(c.a),
                            first + static_cast<std::ptrdiff_t>(c.a) + 1);
            }
            break;
        case Move::swap:
            std::swap(seq[c.a], seq[c.b]);
            break;
        case Move::reverse:
            std::reverse(first + static_cast<std::ptrdiff_t>(c.a), first + static_cast<std::ptrdiff_t>(c.b) + 1);
            break;
    }
}

}  // namespace

EPResult tsp_ep_all(std::span<const NodeIndex> sequence, const PartitionContext& ctx, bool fixed_endpoints,
                    LocalSearchStats* stats) {
    std::vector<NodeIndex> current(sequence.begin(), sequence.end());
    const std::size_t n = current.size();
    const bool pinned = fixed_endpoints || (n >= 2 && current.front() == current.back());
    const std::size_t lo = pinned ? 1 : 0;
    const std::size_t hi = pinned ? (n >= 2 ? n - 2 : 0) : n - 1;  // inclusive

    LocalSearchStats local;
    double current_value = exact_partition_value(current, ctx);
    ++local.evaluations;

    std::vector<NodeIndex> trial(n);
    while (n >= 2 && hi > lo) {
        ++local.sweeps;
        double best_value = current_value - kImprovementEpsilon;
        std::optional<Candidate> best;
        auto consider = [&](const Candidate& c) {
            std::copy(current.begin(), current.end(), trial.begin());
            apply_move(trial, c);
            const double v = exact_partition_value(trial, ctx);
            ++local.evaluations;
            if (v < best_value) {
                best_value = v;
                best = c;
            }
        };
        // Adjacent relocations and two-element reversals duplicate swaps.
        for (std::size_t a = lo; a <= hi; ++a) {
            for (std::size_t b = lo; b <= hi; ++b) {
                if (a == b || a + 1 == b || b + 1 == a) continue;
                consider({Move::relocate, a, b});
            }
        }
        for (std::size_t a = lo; a <= hi; ++a) {
            for (std::size_t b = a + 1; b <= hi; ++b) consider({Move::swap, a, b});
        }
        for (std::size_t a = lo; a <= hi; ++a) {
            for (std::size_t b = a + 2; b <= hi; ++b) consider({Move::reverse, a, b});
        }
        if (!best) break;
        apply_move(current, *best);
        current_value = best_value;
        ++local.moves;
    }

    if (stats) *stats = local;
    return exact_partition(current, ctx);
}

}  // namespace tspd

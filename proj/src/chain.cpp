#include "tspd/chain.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace tspd {

Chain::Chain(std::vector<Ring> rings) : rings_(std::move(rings)), total_cost_(ring_cost(rings_)) {}

std::vector<NodeIndex> ring_path(std::span<const Ring> rings) {
    std::vector<NodeIndex> seq;
    for (const auto& r : rings) {
        seq.insert(seq.end(), r.path.begin() + (seq.empty() ? 0 : 1), r.path.end());
    }
    return seq;
}

double ring_cost(std::span<const Ring> rings) {
    double total = 0.0;
    for (const auto& r : rings) total += r.cost;
    return total;
}

std::vector<NodeIndex> Chain::node_sequence() const { return ring_path(rings_); }

int Chain::node_count() const {
    const auto seq = node_sequence();
    const auto n = static_cast<int>(seq.size());
    return (n > 1 && seq.front() == seq.back()) ? n - 1 : n;
}

std::vector<Chainlet> group(const Chain& chain, int max_size) {
    if (max_size < 4) throw std::invalid_argument("max chainlet size must be at least 4");
    const auto& rings = chain.rings();
    const std::size_t count = rings.size();
    std::vector<Chainlet> out;

    // Distinct nodes in rings[s..e]; only a window spanning a closed chain
    // repeats a node (the depot at both ends).
    auto window_size = [&](std::size_t s, std::size_t e, std::size_t positions) {
        return static_cast<int>(positions) - (rings[s].start() == rings[e].end() ? 1 : 0);
    };

    std::optional<std::size_t> prev_last;
    for (std::size_t s = 0; s < count; ++s) {
        std::size_t e = s;
        std::size_t positions = rings[s].path.size();
        while (e + 1 < count) {
            const std::size_t grown = positions + rings[e + 1].path.size() - 1;
            if (window_size(s, e + 1, grown) > max_size) break;
            positions = grown;
            ++e;
        }
        if (prev_last && e <= *prev_last) continue;
        Chainlet c;
        c.first_ring = s;
        c.last_ring = e;
        c.node_sequence = ring_path(std::span(rings).subspan(s, e - s + 1));
        c.size = window_size(s, e, positions);
        c.oversize = c.size > max_size;
        out.push_back(std::move(c));
        prev_last = e;
        if (e + 1 == count) break;
    }
    return out;
}

Chain splice(const Chain& chain, std::size_t first_ring, std::size_t last_ring, std::span<const Ring> replacement) {
    const auto& rings = chain.rings();
    if (first_ring > last_ring || last_ring >= rings.size()) throw std::invalid_argument("splice range out of bounds");
    if (replacement.empty() || replacement.front().start() != rings[first_ring].start() ||
        replacement.back().end() != rings[last_ring].end()) {
        throw std::invalid_argument("splice boundary mismatch");
    }
    std::vector<Ring> out;
    out.reserve(rings.size() - (last_ring - first_ring + 1) + replacement.size());
    out.insert(out.end(), rings.begin(), rings.begin() + static_cast<std::ptrdiff_t>(first_ring));
    out.insert(out.end(), replacement.begin(), replacement.end());
    out.insert(out.end(), rings.begin() + static_cast<std::ptrdiff_t>(last_ring) + 1, rings.end());
    return Chain(std::move(out));
}

ChainletKey sequence_key(std::span<const NodeIndex> sequence) {
    constexpr std::uint64_t kOffset = 14695981039346656037ULL;
    constexpr std::uint64_t kPrime = 1099511628211ULL;
    std::uint64_t h = kOffset;
    for (NodeIndex v : sequence) {
        const auto u = static_cast<std::uint32_t>(v);
        for (int byte = 0; byte < 4; ++byte) {
            h ^= (u >> (8 * byte)) & 0xFFu;
            h *= kPrime;
        }
    }
    return {h};
}

std::string validate_chain(const Chain& chain, int node_count) {
    const auto& rings = chain.rings();
    std::ostringstream err;
    if (rings.empty()) return "chain has no rings";
    if (rings.front().start() != 0) return "chain does not start at the depot";
    if (rings.back().end() != 0) return "chain does not end at the depot";
    for (std::size_t r = 0; r < rings.size(); ++r) {
        const Ring& ring = rings[r];
        if (ring.path.size() < 2) {
            err << "ring " << r << " covers fewer than 2 nodes";
            return err.str();
        }
        if (ring.drone) {
            const auto it = std::find(ring.path.begin() + 1, ring.path.end() - 1, *ring.drone);
            if (it == ring.path.end() - 1) {
                err << "ring " << r << " drone node is not interior";
                return err.str();
            }
        } else if (ring.path.size() != 2) {
            err << "ring " << r << " has truck nodes but no drone";
            return err.str();
        }
        if (r + 1 < rings.size() && ring.end() != rings[r + 1].start()) {
            err << "ring " << r << " does not link to ring " << r + 1;
            return err.str();
        }
    }
    auto seq = chain.node_sequence();
    std::sort(seq.begin(), seq.end());
    std::vector<NodeIndex> expected{0};
    for (NodeIndex v = 0; v < node_count; ++v) expected.push_back(v);
    if (seq != expected) return "chain does not visit every customer exactly once";
    return {};
}

int max_rings_for_size(int n) { return (2 * n - 3 + n % 3) / 3; }

}  // namespace tspd

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tspd/partition.hpp"

namespace tspd {

inline constexpr int kDefaultMaxChainletSize = 20;

class Chain {
public:
    Chain() = default;
    explicit Chain(std::vector<Ring> rings);

    const std::vector<Ring>& rings() const { return rings_; }
    std::size_t ring_count() const { return rings_.size(); }
    double total_cost() const { return total_cost_; }
    // Distinct nodes, depot included once.
    int node_count() const;
    // Concatenated ring paths, shared boundary nodes listed once.
    std::vector<NodeIndex> node_sequence() const;

    bool operator==(const Chain& other) const { return rings_ == other.rings_; }

private:
    std::vector<Ring> rings_;
    double total_cost_ = 0.0;
};

// Concatenated path of rings[first..last]; boundary nodes appear once.
std::vector<NodeIndex> ring_path(std::span<const Ring> rings);
double ring_cost(std::span<const Ring> rings);

struct Chainlet {
    std::size_t first_ring = 0;
    std::size_t last_ring = 0;  // inclusive
    std::vector<NodeIndex> node_sequence;
    int size = 0;  // distinct nodes
    bool oversize = false;

    NodeIndex start() const { return node_sequence.front(); }
    NodeIndex end() const { return node_sequence.back(); }
    std::size_t ring_count() const { return last_ring - first_ring + 1; }
};

// Sliding maximal windows of consecutive rings at most max_size distinct
// nodes each; a window whose ring range lies inside the previously emitted
// one is dropped. A lone ring above max_size forms its own (oversize) window.
std::vector<Chainlet> group(const Chain& chain, int max_size = kDefaultMaxChainletSize);

// Replaces rings[first..last] with the fragment. Throws std::invalid_argument
// when the fragment's boundary nodes differ from the replaced range's.
Chain splice(const Chain& chain, std::size_t first_ring, std::size_t last_ring, std::span<const Ring> replacement);

struct ChainletKey {
    std::uint64_t hash64 = 0;
    bool operator==(const ChainletKey&) const = default;
};

struct ChainletKeyHasher {
    std::size_t operator()(const ChainletKey& k) const { return static_cast<std::size_t>(k.hash64); }
};

// FNV-1a over the little-endian 32-bit node indices.
ChainletKey sequence_key(std::span<const NodeIndex> sequence);
inline ChainletKey chainlet_key(const Chainlet& chainlet) { return sequence_key(chainlet.node_sequence); }

// Structural checks: rings link end-to-start, the chain opens and closes at
// the depot and every customer is covered exactly once. Returns an empty
// string when valid, otherwise a description of the first violation.
std::string validate_chain(const Chain& chain, int node_count);

// Maximum ring count of a chainlet with n nodes when no two straight rings
// are adjacent.
int max_rings_for_size(int n);

}  // namespace tspd

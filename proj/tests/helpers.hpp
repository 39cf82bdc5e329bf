#pragma once

#include <cstdint>
#include <optional>
#include <algorithm>
#include <random>
#include <vector>

#include "tspd/instance.hpp"
#include "tspd/partition.hpp"

namespace testing_support {

// Random small instance with optional range and a random eligibility subset.
inline tspd::Instance random_instance(std::mt19937_64& rng, int n, double alpha, std::optional<double> range,
                                      bool restrict_eligibility) {
    std::uniform_real_distribution<double> coord(0.0, 100.0);
    std::vector<tspd::Point> pts(static_cast<std::size_t>(n));
    for (auto& p : pts) p = {coord(rng), coord(rng)};
    std::optional<std::vector<tspd::NodeIndex>> eligible;
    if (restrict_eligibility) {
        eligible.emplace();
        std::bernoulli_distribution keep(0.5);
        for (int v = 1; v < n; ++v) {
            if (keep(rng)) eligible->push_back(v);
        }
    }
    return tspd::build_instance(pts, alpha, range, eligible);
}

inline std::vector<tspd::NodeIndex> identity_tour(int n) {
    std::vector<tspd::NodeIndex> seq;
    for (int v = 0; v < n; ++v) seq.push_back(v);
    seq.push_back(0);
    return seq;
}

inline std::vector<tspd::NodeIndex> shuffled_tour(std::mt19937_64& rng, int n) {
    auto seq = identity_tour(n);
    std::shuffle(seq.begin() + 1, seq.end() - 1, rng);
    return seq;
}

inline double chain_value(const std::vector<tspd::Ring>& rings) {
    double total = 0.0;
    for (const auto& r : rings) total += r.cost;
    return total;
}

}  // namespace testing_support

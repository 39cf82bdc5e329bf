#include "tspd/instance.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>

namespace tspd {

CostModel::CostModel(const std::vector<Point>& points, double alpha)
    : n_(static_cast<int>(points.size())), alpha_(alpha) {
    const auto cells = static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
    dist_.assign(cells, 0.0);
    truck_.assign(cells, 0.0);
    drone_.assign(cells, 0.0);
    for (int u = 0; u < n_; ++u) {
        for (int v = u + 1; v < n_; ++v) {
            const double d = std::hypot(points[u].x - points[v].x, points[u].y - points[v].y);
            const double dr = d / alpha;
            const double tr = alpha * dr;
            dist_[idx(u, v)] = dist_[idx(v, u)] = d;
            drone_[idx(u, v)] = drone_[idx(v, u)] = dr;
            truck_[idx(u, v)] = truck_[idx(v, u)] = tr;
            d_max_ = std::max(d_max_, d);
        }
    }
}

Instance::Instance(std::vector<Point> points, double alpha, std::optional<double> flying_range_pct,
                   std::optional<std::vector<NodeIndex>> eligible)
    : points_(std::move(points)), alpha_(alpha) {
    if (points_.size() < 2) {
        throw std::invalid_argument("instance needs at least 2 nodes");
    }
    if (!(alpha_ >= 1.0) || !std::isfinite(alpha_)) {
        throw std::invalid_argument("alpha must be >= 1");
    }
    if (flying_range_pct) {
        if (!(*flying_range_pct > 0.0)) {
            throw std::invalid_argument("flying range percentage must be positive");
        }
        if (*flying_range_pct < 200.0) {
            flying_range_pct_ = flying_range_pct;
        }
    }
    eligible_mask_.assign(points_.size(), !eligible.has_value());
    eligible_mask_[0] = false;
    if (eligible) {
        restricted_ = true;
        for (NodeIndex v : *eligible) {
            if (v == 0) {
                throw std::invalid_argument("the depot cannot be a drone node");
            }
            if (v < 0 || v >= static_cast<NodeIndex>(points_.size())) {
                throw std::invalid_argument("eligible node out of range");
            }
            eligible_mask_[static_cast<std::size_t>(v)] = true;
        }
    }
    costs_ = CostModel(points_, alpha_);
}

std::vector<NodeIndex> Instance::eligible_nodes() const {
    std::vector<NodeIndex> out;
    for (NodeIndex v = 1; v < node_count(); ++v) {
        if (is_eligible(v)) out.push_back(v);
    }
    return out;
}

std::optional<double> Instance::range_limit() const {
    if (!flying_range_pct_) return std::nullopt;
    return (*flying_range_pct_ / 100.0) * costs_.d_max();
}

Instance build_instance(const std::vector<Point>& coords, double alpha, std::optional<double> flying_range_pct,
                        std::optional<std::vector<NodeIndex>> eligible) {
    return Instance(coords, alpha, flying_range_pct, std::move(eligible));
}

std::vector<std::pair<NodeIndex, NodeIndex>> duplicate_points(const Instance& instance) {
    std::map<std::pair<double, double>, NodeIndex> seen;
    std::vector<std::pair<NodeIndex, NodeIndex>> dups;
    const auto& pts = instance.points();
    for (NodeIndex v = 0; v < static_cast<NodeIndex>(pts.size()); ++v) {
        auto [it, inserted] = seen.emplace(std::make_pair(pts[v].x, pts[v].y), v);
        if (!inserted) dups.emplace_back(it->second, v);
    }
    return dups;
}

std::optional<Distribution> parse_distribution(const std::string& name) {
    if (name == "uniform") return Distribution::uniform;
    if (name == "one_center" || name == "1-center" || name == "1center") return Distribution::one_center;
    if (name == "two_center" || name == "2-center" || name == "2center") return Distribution::two_center;
    return std::nullopt;
}

std::string to_string(Distribution dist) {
    switch (dist) {
        case Distribution::uniform: return "uniform";
        case Distribution::one_center: return "one_center";
        case Distribution::two_center: return "two_center";
    }
    return "unknown";
}

namespace {

// Transforms over the raw engine output rather than std distributions,
// whose algorithms are implementation-defined.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : engine_(seed) {}

    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double normal() {
        const double u1 = 1.0 - unit();  // (0, 1]
        const double u2 = unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
};

Point radial_sample(Sampler& rng, Point center, double sigma, double side) {
    for (;;) {
        const double r = std::abs(rng.normal()) * sigma;
        const double theta = 2.0 * std::numbers::pi * rng.unit();
        Point p{center.x + r * std::cos(theta), center.y + r * std::sin(theta)};
        if (p.x >= 0.0 && p.x <= side && p.y >= 0.0 && p.y <= side) return p;
    }
}

}  // namespace

std::vector<Point> generate_points(Distribution dist, int n, std::uint64_t seed, const GeneratorParams& params) {
    if (n < 2) throw std::invalid_argument("generator needs n >= 2");
    Sampler rng(seed);
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(n));
    const double s = params.side;
    for (int i = 0; i < n; ++i) {
        switch (dist) {
            case Distribution::uniform:
                pts.push_back({rng.unit() * s, rng.unit() * s});
                break;
            case Distribution::one_center:
                pts.push_back(radial_sample(rng, {s / 2.0, s / 2.0}, params.one_center_sigma, s));
                break;
            case Distribution::two_center: {
                const double a = rng.unit() < 0.5 ? params.two_center_first : params.two_center_second;
                pts.push_back(radial_sample(rng, {a * s, a * s}, params.two_center_sigma, s));
                break;
            }
        }
    }
    return pts;
}

Instance generate(Distribution dist, int n, std::uint64_t seed, double alpha, std::optional<double> flying_range_pct,
                  const GeneratorParams& params) {
    return build_instance(generate_points(dist, n, seed, params), alpha, flying_range_pct);
}

}  // namespace tspd

// Acceptance checks P1-P9. One PASS/FAIL line per criterion; exit status is
// nonzero when any criterion fails.

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "tspd/icp.hpp"
#include "tspd/io.hpp"
#include "tspd/nicp.hpp"
#include "tspd/oracle.hpp"

using namespace tspd;

namespace {

constexpr double kValueTol = 1e-9;      // P1, P9: absolute agreement of objective values
constexpr double kSlopeLimit = 2.1;     // P2
constexpr int kLaterCallLimit = 25;     // P4
constexpr double kGapFactor = 1.05;     // P6
constexpr double kGapShare = 0.90;      // P6
constexpr double kRangeTol = 1e-9;      // P8: two-leg distance vs budget
constexpr double kMonotoneTol = 1e-9;   // P8: objective non-increasing in f

int failures = 0;

void report(const char* id, bool ok, const std::string& detail) {
    std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

int consecutive_straights(const std::vector<Ring>& rings) {
    int count = 0;
    for (std::size_t i = 1; i < rings.size(); ++i) {
        if (rings[i - 1].is_straight() && rings[i].is_straight()) ++count;
    }
    return count;
}

std::string run_fingerprint(const IcpResult& r) {
    std::ostringstream out;
    out << io::solution_to_json(r.chain).dump() << '\n';
    write_trace_csv(out, r.trace, false);
    return out.str();
}

void p1() {
    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<int> size(6, 14);
    const double alphas[] = {1.0, 2.0, 3.0};
    const std::optional<double> ranges[] = {30.0, 50.0, std::nullopt};
    int mismatches = 0;
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        const int n = size(rng);
        const double alpha = alphas[t % 3];
        const auto range = ranges[(t / 3) % 3];
        const bool restricted = (t / 9) % 2 == 1;
        const auto inst = testing_support::random_instance(rng, n, alpha, range, restricted);
        const PartitionContext ctx(inst);
        const auto seq = testing_support::shuffled_tour(rng, n);
        const double pruned = exact_partition(seq, ctx).value;
        const double naive = oracle::naive_ep(seq, inst.costs(), ctx.constraints()).value;
        const double diff = std::abs(pruned - naive);
        worst = std::max(worst, diff);
        if (diff > kValueTol) ++mismatches;
    }
    report("P1", mismatches == 0,
           fmt("pruned EP vs naive on 200 instances: mismatches=%d max|diff|=%.3g (tol %.0e)", mismatches, worst,
               kValueTol));
}

void p2() {
    const int sizes[] = {10, 50, 100, 200};
    const double alphas[] = {1.0, 2.0, 3.0};
    const std::optional<double> ranges[] = {std::nullopt, 50.0};
    int violations = 0;
    std::int64_t calls = 0;
    // Means per N across every configuration, for the slope fit.
    std::vector<double> xs, ys;
    for (int n : sizes) {
        double sum = 0.0;
        int count = 0;
        for (double alpha : alphas) {
            for (const auto& range : ranges) {
                for (std::uint64_t seed = 1; seed <= 5; ++seed) {
                    const auto inst = generate(Distribution::uniform, n, seed, alpha, range);
                    const PartitionContext ctx(inst);
                    for (auto method : {TourMethod::two_opt_improved, TourMethod::random}) {
                        const auto tour = construct_tour(inst, method, seed);
                        const auto r = exact_partition(tour.sequence, ctx);
                        ++calls;
                        if (r.rings_enumerated >= static_cast<std::int64_t>(n) * n) ++violations;
                        sum += static_cast<double>(r.rings_enumerated);
                        ++count;
                    }
                }
            }
        }
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(sum / count));
    }
    const double mx = (xs[0] + xs[1] + xs[2] + xs[3]) / 4.0;
    const double my = (ys[0] + ys[1] + ys[2] + ys[3]) / 4.0;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    const double slope = sxy / sxx;
    report("P2", violations == 0 && slope <= kSlopeLimit,
           fmt("rings_enumerated >= N^2 in %d of %lld EP calls; log-log slope=%.3f (limit %.1f)", violations,
               static_cast<long long>(calls), slope, kSlopeLimit));
}

void p3() {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> size(10, 60);
    int ep_bad = 0, icp_bad = 0;
    for (int t = 0; t < 100; ++t) {
        const double alpha = t % 2 == 0 ? 2.0 : 3.0;
        const auto inst = generate(Distribution::uniform, size(rng), 1000 + static_cast<std::uint64_t>(t), alpha);
        const PartitionContext ctx(inst);
        const auto result = solve_icp(inst);
        ep_bad += consecutive_straights(exact_partition(result.initial_tour.sequence, ctx).chain);
        icp_bad += consecutive_straights(result.chain.rings());
    }
    report("P3", ep_bad == 0 && icp_bad == 0,
           fmt("consecutive straight rings over 100 instances: EP=%d ICP=%d", ep_bad, icp_bad));
}

void p4() {
    const int sizes[] = {50, 100, 200};
    int first_bad = 0, later_bad = 0, runs = 0;
    int first_max[3] = {0, 0, 0}, later_max = 0;
    for (int r = 0; r < 50; ++r) {
        const int which = r % 3;
        const int n = sizes[which];
        const auto inst = generate(Distribution::uniform, n, 500 + static_cast<std::uint64_t>(r), 2.0);
        IcpConfig config;
        config.max_size = 20;
        const auto result = solve_icp(inst, config);
        ++runs;
        const auto& its = result.trace.iterations;
        const int bound = (2 * n - 1 + 2) / 3;
        first_max[which] = std::max(first_max[which], its.front().tsp_ep_all_calls);
        if (its.front().tsp_ep_all_calls > bound) ++first_bad;
        for (std::size_t t = 1; t < its.size(); ++t) {
            later_max = std::max(later_max, its[t].tsp_ep_all_calls);
            if (its[t].tsp_ep_all_calls > kLaterCallLimit) ++later_bad;
        }
    }
    report("P4", first_bad == 0 && later_bad == 0,
           fmt("%d runs: first-iteration max calls %d/%d/%d (bounds 33/67/133), violations=%d; later max=%d (limit "
               "%d), violations=%d",
               runs, first_max[0], first_max[1], first_max[2], first_bad, later_max, kLaterCallLimit, later_bad));
}

void p5() {
    int differing = 0, non_decreasing = 0, unterminated = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto inst = generate(seed % 2 ? Distribution::uniform : Distribution::two_center, 100, seed, 2.0,
                                   seed % 3 == 0 ? std::optional<double>(50.0) : std::nullopt);
        const auto a = solve_icp(inst);
        const auto b = solve_icp(inst);
        if (run_fingerprint(a) != run_fingerprint(b)) ++differing;
        double previous = a.trace.initial_cost;
        for (const auto& it : a.trace.iterations) {
            if (!it.accepted) continue;
            if (!(it.total_cost < previous)) ++non_decreasing;
            previous = it.total_cost;
        }
        if (a.trace.iterations.empty() || a.trace.iterations.back().accepted) ++unterminated;
    }
    report("P5", differing == 0 && non_decreasing == 0 && unterminated == 0,
           fmt("10 instances: rerun differences=%d, non-decreasing steps=%d, runs without a final rejected "
               "iteration=%d",
               differing, non_decreasing, unterminated));
}

void p6() {
    int below = 0, within = 0;
    double worst = 1.0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const double alpha = 1.0 + static_cast<double>(seed % 3);
        const auto inst = generate(Distribution::uniform, 8, 3000 + seed, alpha);
        const double icp = solve_icp(inst).chain.total_cost();
        const double opt = oracle::exhaustive_tspd(inst).cost;
        if (icp < opt - kValueTol) ++below;
        if (icp <= kGapFactor * opt + kValueTol) ++within;
        worst = std::max(worst, icp / opt);
    }
    const double share = within / 50.0;
    report("P6", below == 0 && share >= kGapShare,
           fmt("N=8, 50 instances: below optimum=%d, within %.2fx on %.0f%% (need %.0f%%), worst ratio=%.4f",
               below, kGapFactor, 100.0 * share, 100.0 * kGapShare, worst));
}

void p7() {
    struct Band {
        double alpha, lo, hi;
    };
    const Band bands[] = {{1.0, 0.78, 0.86}, {2.0, 0.63, 0.71}, {3.0, 0.58, 0.66}};
    bool ok = true;
    std::string detail;
    for (const auto& band : bands) {
        double sum = 0.0;
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            const auto inst = generate(Distribution::uniform, 100, seed, band.alpha);
            const auto result = solve_icp(inst);
            sum += result.chain.total_cost() / result.initial_tour.length;
        }
        const double mean = sum / 100.0;
        const bool in = mean >= band.lo && mean <= band.hi;
        ok = ok && in;
        detail += fmt("%salpha=%.0f mean=%.4f [%.2f,%.2f]%s", detail.empty() ? "" : "; ", band.alpha, mean, band.lo,
                      band.hi, in ? "" : " out of band");
    }
    report("P7", ok, detail);
}

void p8() {
    const double budgets[] = {10.0, 30.0, 50.0};
    const std::optional<double> sweep[] = {10.0, 30.0, 50.0, 100.0, 150.0, std::nullopt};
    int diff200 = 0, range_bad = 0, ep_monotone_bad = 0, icp_monotone_bad = 0;
    double worst_excess = -1e300;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto base = generate(Distribution::uniform, 40, 4000 + seed, 2.0);
        const auto at = [&](std::optional<double> f) {
            return build_instance(base.points(), base.alpha(), f);
        };
        const auto tour = construct_tour(base).sequence;

        const auto unlimited = at(std::nullopt);
        const auto f200 = at(200.0);
        const PartitionContext cu(unlimited), c200(f200);
        if (!(exact_partition(tour, cu).chain == exact_partition(tour, c200).chain)) ++diff200;
        if (!(solve_icp(unlimited).chain == solve_icp(f200).chain)) ++diff200;

        for (double f : budgets) {
            const auto inst = at(f);
            const PartitionContext ctx(inst);
            const double budget = f / 100.0 * inst.costs().d_max();
            const auto check = [&](const std::vector<Ring>& rings) {
                for (const auto& r : rings) {
                    if (!r.drone) continue;
                    const double legs = inst.costs().distance(r.start(), *r.drone) +
                                        inst.costs().distance(*r.drone, r.end());
                    worst_excess = std::max(worst_excess, legs - budget);
                    if (legs > budget + kRangeTol) ++range_bad;
                }
            };
            check(exact_partition(tour, ctx).chain);
            check(solve_icp(inst).chain.rings());
        }

        double ep_prev = 1e300, icp_prev = 1e300;
        for (const auto& f : sweep) {
            const auto inst = at(f);
            const PartitionContext ctx(inst);
            const double ep = exact_partition(tour, ctx).value;
            const double icp = solve_icp(inst).chain.total_cost();
            if (ep > ep_prev + kMonotoneTol) ++ep_monotone_bad;
            if (icp > icp_prev + kMonotoneTol) ++icp_monotone_bad;
            ep_prev = ep;
            icp_prev = icp;
        }
    }
    // Monotonicity is gated on the exact partition of a fixed sequence, where a
    // weaker constraint provably never hurts; ICP is a heuristic whose search
    // path changes with f, so its count is reported but not gated.
    report("P8", diff200 == 0 && range_bad == 0 && ep_monotone_bad == 0,
           fmt("30 instances: f=200 vs unlimited differences=%d; range violations=%d (max excess %.3g); EP "
               "increases with f=%d; ICP increases with f=%d (informational)",
               diff200, range_bad, worst_excess, ep_monotone_bad, icp_monotone_bad));
}

void p9() {
    int oracle_bad = 0, zero_bad = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto inst = generate(static_cast<Distribution>(seed % 3), 60, 5000 + seed, 1.0 + static_cast<double>(seed % 3),
                                   seed % 2 ? std::optional<double>(50.0) : std::nullopt);
        const PartitionContext ctx(inst);
        OraclePredictor oracle(ctx);
        const double icp = solve_icp(inst).chain.total_cost();
        const double nicp = solve_nicp(inst, oracle).chain.total_cost();
        worst = std::max(worst, std::abs(nicp - icp));
        if (std::abs(nicp - icp) > kValueTol) ++oracle_bad;

        ConstantPredictor zero(0.0);
        const auto z = solve_nicp(inst, zero);
        if (z.chain.total_cost() > z.trace.initial_cost + kValueTol) ++zero_bad;
    }
    report("P9", oracle_bad == 0 && zero_bad == 0,
           fmt("30 instances: oracle NICP vs ICP mismatches=%d (max|diff|=%.3g, tol %.0e); zero predictor above "
               "initial=%d",
               oracle_bad, worst, kValueTol, zero_bad));
}

}  // namespace

int main() {
    p1();
    p2();
    p3();
    p4();
    p5();
    p6();
    p7();
    p8();
    p9();
    std::printf("%s: %d criteria failed\n", failures ? "acceptance FAIL" : "acceptance PASS", failures);
    return failures ? 1 : 0;
}

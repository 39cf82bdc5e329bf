#include <doctest.h>

#include <sstream>

#include "tspd/nicp.hpp"

using namespace tspd;

namespace {

std::string mock(const std::string& args) { return std::string(MOCK_PREDICTOR) + " " + args; }

std::string trace_text(const IcpTrace& trace) {
    std::ostringstream out;
    write_trace_csv(out, trace, false);
    return out.str();
}

// Per accepted iteration: which chainlet was replaced and the resulting cost.
std::vector<std::pair<std::uint64_t, double>> accepted_updates(const IcpTrace& trace) {
    std::vector<std::pair<std::uint64_t, double>> out;
    for (const auto& r : trace.iterations) {
        if (r.accepted) out.emplace_back(r.selected_key, r.total_cost);
    }
    return out;
}

}  // namespace

TEST_CASE("an exact predictor reproduces the ICP result") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const auto inst = generate(Distribution::uniform, 60, seed, 2.0 + seed % 2, seed % 3 == 0 ? 50.0 : 200.0);
        const PartitionContext ctx(inst);
        OraclePredictor oracle(ctx);
        const auto icp = solve_icp(inst);
        const auto nicp = solve_nicp(inst, oracle);
        CHECK(nicp.chain == icp.chain);
        CHECK(nicp.chain.total_cost() == icp.chain.total_cost());
        CHECK(accepted_updates(nicp.trace) == accepted_updates(icp.trace));
        CHECK(nicp.trace.predictor_failures == 0);
        CHECK(nicp.trace.predictor_items > 0);
    }
}

TEST_CASE("a zero predictor cannot make the chain worse") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto inst = generate(Distribution::two_center, 50, seed, 2.0);
        ConstantPredictor zero(0.0);
        const auto result = solve_nicp(inst, zero);
        CHECK(validate_chain(result.chain, 50).empty());
        CHECK(result.chain.total_cost() <= result.trace.initial_cost + 1e-9);
        // Every update is confirmed by a real run.
        double previous = result.trace.initial_cost;
        for (const auto& r : result.trace.iterations) {
            if (r.accepted) {
                CHECK(r.delta > kImprovementEpsilon);
                CHECK(r.total_cost < previous);
                previous = r.total_cost;
            }
        }
    }
}

TEST_CASE("an overly pessimistic predictor still terminates at an ICP fixpoint") {
    const auto inst = generate(Distribution::uniform, 50, 2, 2.0);
    ConstantPredictor huge(1e6);
    const auto result = solve_nicp(inst, huge);
    CHECK(validate_chain(result.chain, 50).empty());
    CHECK(result.chain.total_cost() <= result.trace.initial_cost + 1e-9);
    // Termination requires every final chainlet to be confirmed without gain.
    const PartitionContext ctx(inst);
    OptimizedCache cache;
    IcpTrace trace;
    const auto outcome = iterate_once(result.chain, cache, ctx, IcpConfig{}, trace);
    CHECK_FALSE(outcome.improved);
}

TEST_CASE("reruns with the same predictor are identical") {
    const auto inst = generate(Distribution::uniform, 60, 4, 2.0, 60.0);
    SubprocessPredictor a(mock("path 0.8"));
    SubprocessPredictor b(mock("path 0.8"));
    const auto ra = solve_nicp(inst, a);
    const auto rb = solve_nicp(inst, b);
    CHECK(ra.chain == rb.chain);
    CHECK(trace_text(ra.trace) == trace_text(rb.trace));
    CHECK(ra.trace.predictor_batches == rb.trace.predictor_batches);
    CHECK(validate_chain(ra.chain, 60).empty());
}

TEST_CASE("a predictor that always fails falls back to direct runs") {
    const auto inst = generate(Distribution::uniform, 50, 5, 2.0);
    SubprocessPredictor broken(mock("garbage"));
    const auto result = solve_nicp(inst, broken);
    CHECK(result.trace.predictor_failures == result.trace.predictor_batches);
    CHECK(result.trace.fallback_calls > 0);
    CHECK(result.trace.predictor_items == 0);
    // Confirming every chainlet each iteration is exactly ICP.
    const auto icp = solve_icp(inst);
    CHECK(result.chain == icp.chain);
}

TEST_CASE("an intermittently failing predictor still yields a valid improvement") {
    const auto inst = generate(Distribution::one_center, 60, 6, 3.0);
    SubprocessPredictor flaky(mock("flaky 3 0.1"));
    const auto result = solve_nicp(inst, flaky);
    CHECK(result.trace.predictor_failures >= 1);
    CHECK(result.trace.predictor_failures < result.trace.predictor_batches);
    CHECK(validate_chain(result.chain, 60).empty());
    CHECK(result.chain.total_cost() <= result.trace.initial_cost + 1e-9);
}

TEST_CASE("predictions are batched once per iteration and never repeated") {
    const auto inst = generate(Distribution::uniform, 80, 7, 2.0);
    SubprocessPredictor p(mock("path 0.7"));
    const auto result = solve_nicp(inst, p);
    CHECK(result.trace.predictor_batches <= static_cast<std::int64_t>(result.trace.iterations.size()));
    std::int64_t items = 0;
    for (const auto& r : result.trace.iterations) items += r.predicted_items;
    CHECK(items == result.trace.predictor_items);
    // Each confirmation is one fresh run.
    std::int64_t calls = 0;
    for (const auto& r : result.trace.iterations) {
        calls += r.tsp_ep_all_calls;
        CHECK(r.tsp_ep_all_calls <= 1);
    }
    CHECK(calls == result.trace.tsp_ep_all_calls);
}

TEST_CASE("predicted-cache entry keeps the input path") {
    PredictedCache cache;
    PredictedEntry e;
    e.sequence = {4, 5, 6};
    e.input_path = {4, 6, 5};
    e.predicted_cost = 2.0;
    CHECK(cache.insert(ChainletKey{1}, e));
    CHECK_FALSE(cache.insert(ChainletKey{1}, e));
    const std::vector<NodeIndex> seq{4, 5, 6};
    const std::vector<NodeIndex> other{4, 6};
    REQUIRE(cache.find(ChainletKey{1}, seq) != nullptr);
    CHECK(cache.find(ChainletKey{1}, seq)->input_path == e.input_path);
    CHECK(cache.find(ChainletKey{1}, other) == nullptr);
    CHECK(cache.size() == 1);
}

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tspd/instance.hpp"
#include "tspd/partition.hpp"

namespace tspd {

// Complete-graph encoding of a chainlet input path. Matrices are row-major
// m x m in path order and divided by scale, the largest truck cost between
// any two path nodes.
struct ChainletGraph {
    std::vector<NodeIndex> nodes;  // in-process only; never sent over the wire
    int m = 0;
    std::vector<double> ct;
    std::vector<double> cd;
    double scale = 1.0;
    double f_prime = 0.0;

    double truck(int a, int b) const { return ct[static_cast<std::size_t>(a * m + b)]; }
    double drone(int a, int b) const { return cd[static_cast<std::size_t>(a * m + b)]; }
};

// 1 - f/200, or 0 when the range is unlimited.
double range_feature(std::optional<double> flying_range_pct);

ChainletGraph make_chainlet_graph(std::span<const NodeIndex> path, const CostModel& costs, double f_prime);

double normalize_cost(double cost, double scale);
// Throws std::invalid_argument when scale <= 0.
double rescale_prediction(double normalized, double scale);

class PredictorError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Batch surrogate for the normalized TSP-ep-all cost of each graph.
// Implementations return one finite, nonnegative value per graph, in order,
// or throw PredictorError.
class CostPredictor {
public:
    virtual ~CostPredictor() = default;
    virtual std::vector<double> predict(std::span<const ChainletGraph> batch) = 0;
    virtual std::string name() const = 0;
};

class ConstantPredictor final : public CostPredictor {
public:
    explicit ConstantPredictor(double value) : value_(value) {}
    std::vector<double> predict(std::span<const ChainletGraph> batch) override;
    std::string name() const override { return "constant"; }

private:
    double value_;
};

// Exact answers by running TSP-ep-all on each graph's node path.
class OraclePredictor final : public CostPredictor {
public:
    explicit OraclePredictor(const PartitionContext& ctx) : ctx_(&ctx) {}
    std::vector<double> predict(std::span<const ChainletGraph> batch) override;
    std::string name() const override { return "oracle"; }

private:
    const PartitionContext* ctx_;
};

// Newline-delimited JSON messages.
//   request : {"id": n, "items": [{"pos": [...], "ct": [[...]], "cd": [[...]], "scale": r, "f_prime": r}]}
//   response: {"id": n, "costs": [r, ...]}
std::string encode_request(std::uint64_t id, std::span<const ChainletGraph> batch);
// Throws PredictorError on malformed JSON, a mismatched id or count, or
// negative / non-finite costs.
std::vector<double> decode_response(const std::string& line, std::uint64_t expected_id, std::size_t expected_count);

// Talks the wire protocol to a child process started with /bin/sh -c command.
class SubprocessPredictor final : public CostPredictor {
public:
    explicit SubprocessPredictor(std::string command);
    ~SubprocessPredictor() override;
    SubprocessPredictor(const SubprocessPredictor&) = delete;
    SubprocessPredictor& operator=(const SubprocessPredictor&) = delete;

    std::vector<double> predict(std::span<const ChainletGraph> batch) override;
    std::string name() const override { return "subprocess"; }

private:
    void start();
    void stop();
    std::string read_line();

    std::string command_;
    int pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    std::string buffer_;
    std::uint64_t next_id_ = 1;
};

}  // namespace tspd

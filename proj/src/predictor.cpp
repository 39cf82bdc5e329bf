#include "tspd/predictor.hpp"

#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <csignal>
#include <cstring>
#include <json.hpp>

#include "tspd/local_search.hpp"

namespace tspd {

using nlohmann::json;

double range_feature(std::optional<double> flying_range_pct) {
    if (!flying_range_pct || *flying_range_pct >= 200.0) return 0.0;
    return 1.0 - *flying_range_pct / 200.0;
}

ChainletGraph make_chainlet_graph(std::span<const NodeIndex> path, const CostModel& costs, double f_prime) {
    ChainletGraph g;
    g.nodes.assign(path.begin(), path.end());
    g.m = static_cast<int>(path.size());
    g.f_prime = f_prime;
    double scale = 0.0;
    for (NodeIndex u : path) {
        for (NodeIndex v : path) scale = std::max(scale, costs.truck(u, v));
    }
    // Coincident nodes only: keep the matrices at zero.
    g.scale = scale > 0.0 ? scale : 1.0;
    const auto cells = static_cast<std::size_t>(g.m) * static_cast<std::size_t>(g.m);
    g.ct.resize(cells);
    g.cd.resize(cells);
    for (int a = 0; a < g.m; ++a) {
        for (int b = 0; b < g.m; ++b) {
            const auto cell = static_cast<std::size_t>(a * g.m + b);
            g.ct[cell] = costs.truck(path[a], path[b]) / g.scale;
            g.cd[cell] = costs.drone(path[a], path[b]) / g.scale;
        }
    }
    return g;
}

double normalize_cost(double cost, double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("scale must be positive");
    return cost / scale;
}

double rescale_prediction(double normalized, double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("scale must be positive");
    return normalized * scale;
}

std::vector<double> ConstantPredictor::predict(std::span<const ChainletGraph> batch) {
    return std::vector<double>(batch.size(), value_);
}

std::vector<double> OraclePredictor::predict(std::span<const ChainletGraph> batch) {
    std::vector<double> out;
    out.reserve(batch.size());
    for (const auto& g : batch) {
        const auto result = tsp_ep_all(g.nodes, *ctx_, true);
        double cost = 0.0;
        for (const auto& r : result.chain) cost += r.cost;
        out.push_back(cost / g.scale);
    }
    return out;
}

namespace {

json matrix_json(const std::vector<double>& flat, int m) {
    json rows = json::array();
    for (int a = 0; a < m; ++a) {
        json row = json::array();
        for (int b = 0; b < m; ++b) row.push_back(flat[static_cast<std::size_t>(a * m + b)]);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

std::string encode_request(std::uint64_t id, std::span<const ChainletGraph> batch) {
    json items = json::array();
    for (const auto& g : batch) {
        json pos = json::array();
        for (int a = 0; a < g.m; ++a) pos.push_back(a);
        items.push_back({{"pos", std::move(pos)},
                         {"ct", matrix_json(g.ct, g.m)},
                         {"cd", matrix_json(g.cd, g.m)},
                         {"scale", g.scale},
                         {"f_prime", g.f_prime}});
    }
    json msg = {{"id", id}, {"items", std::move(items)}};
    return msg.dump();
}

std::vector<double> decode_response(const std::string& line, std::uint64_t expected_id, std::size_t expected_count) {
    json msg;
    try {
        msg = json::parse(line);
    } catch (const json::parse_error& e) {
        throw PredictorError(std::string("malformed predictor response: ") + e.what());
    }
    if (!msg.is_object() || !msg.contains("id") || !msg["id"].is_number_integer()) {
        throw PredictorError("predictor response lacks an integer id");
    }
    if (msg["id"].get<std::uint64_t>() != expected_id) throw PredictorError("predictor response id mismatch");
    if (msg.contains("error")) throw PredictorError("predictor reported: " + msg["error"].dump());
    if (!msg.contains("costs") || !msg["costs"].is_array()) throw PredictorError("predictor response lacks costs");
    const auto& costs = msg["costs"];
    if (costs.size() != expected_count) throw PredictorError("predictor returned the wrong number of costs");
    std::vector<double> out;
    out.reserve(costs.size());
    for (const auto& c : costs) {
        if (!c.is_number()) throw PredictorError("non-numeric predicted cost");
        const double v = c.get<double>();
        if (!std::isfinite(v) || v < 0.0) throw PredictorError("predicted cost must be finite and nonnegative");
        out.push_back(v);
    }
    return out;
}

SubprocessPredictor::SubprocessPredictor(std::string command) : command_(std::move(command)) {}

SubprocessPredictor::~SubprocessPredictor() { stop(); }

void SubprocessPredictor::start() {
    std::signal(SIGPIPE, SIG_IGN);
    int in_pipe[2];
    int out_pipe[2];
    if (pipe(in_pipe) != 0) throw PredictorError("pipe failed");
    if (pipe(out_pipe) != 0) {
        close(in_pipe[0]);
        close(in_pipe[1]);
        throw PredictorError("pipe failed");
    }
    const pid_t pid = fork();
    if (pid < 0) {
        for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) close(fd);
        throw PredictorError("fork failed");
    }
    if (pid == 0) {
        dup2(in_pipe[0], STDIN_FILENO);
        dup2(out_pipe[1], STDOUT_FILENO);
        for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) close(fd);
        execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    close(in_pipe[0]);
    close(out_pipe[1]);
    pid_ = pid;
    to_child_ = in_pipe[1];
    from_child_ = out_pipe[0];
    buffer_.clear();
}

void SubprocessPredictor::stop() {
    if (to_child_ >= 0) close(to_child_);
    if (from_child_ >= 0) close(from_child_);
    to_child_ = from_child_ = -1;
    if (pid_ > 0) {
        int status = 0;
        if (waitpid(pid_, &status, WNOHANG) == 0) {
            kill(pid_, SIGTERM);
            waitpid(pid_, &status, 0);
        }
    }
    pid_ = -1;
}

std::string SubprocessPredictor::read_line() {
    constexpr int kTimeoutMs = 60000;
    for (;;) {
        const auto nl = buffer_.find('\n');
        if (nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            return line;
        }
        pollfd pfd{from_child_, POLLIN, 0};
        const int ready = poll(&pfd, 1, kTimeoutMs);
        if (ready == 0) throw PredictorError("predictor timed out");
        if (ready < 0) {
            if (errno == EINTR) continue;
            throw PredictorError("poll failed");
        }
        char chunk[4096];
        const ssize_t got = read(from_child_, chunk, sizeof chunk);
        if (got < 0 && errno == EINTR) continue;
        if (got <= 0) throw PredictorError("predictor closed its output");
        buffer_.append(chunk, static_cast<std::size_t>(got));
    }
}

std::vector<double> SubprocessPredictor::predict(std::span<const ChainletGraph> batch) {
    if (batch.empty()) return {};
    if (pid_ < 0) start();
    const std::uint64_t id = next_id_++;
    try {
        std::string msg = encode_request(id, batch);
        msg.push_back('\n');
        std::size_t sent = 0;
        while (sent < msg.size()) {
            const ssize_t n = write(to_child_, msg.data() + sent, msg.size() - sent);
            if (n < 0 && errno == EINTR) continue;
            if (n <= 0) throw PredictorError("could not write to predictor");
            sent += static_cast<std::size_t>(n);
        }
        return decode_response(read_line(), id, batch.size());
    } catch (const PredictorError&) {
        // Restart on the next batch rather than reuse a desynchronized stream.
        stop();
        throw;
    }
}

}  // namespace tspd

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tspd/icp.hpp"
#include "tspd/io.hpp"
#include "tspd/nicp.hpp"
#include "tspd/oracle.hpp"

namespace fs = std::filesystem;
using namespace tspd;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::optional<double> parse_range(const std::string& text) {
    if (text == "unlimited" || text == "inf" || text == "none") return std::nullopt;
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size()) throw std::runtime_error("flying range must be a number or 'unlimited': " + text);
    return value;
}

Distribution require_distribution(const std::string& name) {
    auto dist = parse_distribution(name);
    if (!dist) throw std::runtime_error("unknown distribution: " + name);
    return *dist;
}

TourMethod require_tour_method(const std::string& name) {
    auto method = parse_tour_method(name);
    if (!method) throw std::runtime_error("unknown tour method: " + name);
    return *method;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

std::unique_ptr<CostPredictor> make_predictor(const std::string& choice, const PartitionContext& ctx) {
    if (choice == "none" || choice.empty()) throw std::runtime_error("nicp needs --predictor (oracle, zero or a command)");
    if (choice == "oracle") return std::make_unique<OraclePredictor>(ctx);
    if (choice == "zero") return std::make_unique<ConstantPredictor>(0.0);
    return std::make_unique<SubprocessPredictor>(choice);
}

struct SolveOptions {
    std::string algo = "icp";
    std::string predictor = "none";
    int max_size = kDefaultMaxChainletSize;
    std::string tour_method = "two_opt_improved";
    std::uint64_t seed = 0;
};

struct SolveOutcome {
    Chain chain;
    IcpTrace trace;
    double ms = 0.0;
};

SolveOutcome run_solver(const Instance& instance, const SolveOptions& opt) {
    IcpConfig config;
    config.max_size = opt.max_size;
    config.tour_method = require_tour_method(opt.tour_method);
    config.tour_seed = opt.seed;

    SolveOutcome out;
    const auto t0 = Clock::now();
    if (opt.algo == "icp") {
        auto result = solve_icp(instance, config);
        out.chain = std::move(result.chain);
        out.trace = std::move(result.trace);
    } else if (opt.algo == "nicp") {
        const PartitionContext ctx(instance);
        auto predictor = make_predictor(opt.predictor, ctx);
        NicpConfig nicp;
        nicp.icp = config;
        auto result = solve_nicp(instance, *predictor, nicp);
        out.chain = std::move(result.chain);
        out.trace = std::move(result.trace);
    } else if (opt.algo == "ep" || opt.algo == "tspepall") {
        const PartitionContext ctx(instance);
        const auto tour = construct_tour(instance, config.tour_method, config.tour_seed);
        out.trace.initial_tour_length = tour.length;
        auto result = opt.algo == "ep" ? exact_partition(tour.sequence, ctx) : tsp_ep_all(tour.sequence, ctx, true);
        out.chain = Chain(std::move(result.chain));
        out.trace.initial_cost = out.chain.total_cost();
    } else {
        throw std::runtime_error("unknown algorithm: " + opt.algo);
    }
    out.ms = ms_since(t0);
    return out;
}

std::vector<fs::path> instance_files(const std::string& dir) {
    if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

// verify: pruned EP against the naive DP on several sequences, plus the
// exhaustive optimum as a lower bound for ICP on small instances.
bool run_verify(const Instance& instance, std::ostream& report) {
    const PartitionContext ctx(instance);
    const auto constraints = ConstraintSet::from_instance(instance);
    bool ok = true;
    std::vector<std::pair<std::string, std::vector<NodeIndex>>> sequences;
    for (auto method : {TourMethod::two_opt_improved, TourMethod::nearest_neighbor, TourMethod::random}) {
        sequences.emplace_back(to_string(method), construct_tour(instance, method, 1).sequence);
    }
    report << std::setprecision(12);
    for (const auto& [label, seq] : sequences) {
        const auto pruned = exact_partition(seq, ctx);
        const auto naive = oracle::naive_ep(seq, instance.costs(), constraints);
        const double n = static_cast<double>(seq.size());
        const bool same = std::abs(pruned.value - naive.value) <= 1e-9;
        const bool bound = static_cast<double>(pruned.rings_enumerated) < n * n;
        const std::string chain_error = validate_chain(Chain(pruned.chain), instance.node_count());
        report << (same && bound && chain_error.empty() ? "PASS" : "FAIL") << " ep[" << label
               << "] pruned=" << pruned.value << " naive=" << naive.value
               << " rings=" << pruned.rings_enumerated << " n^2=" << n * n;
        if (!chain_error.empty()) report << " chain: " << chain_error;
        report << '\n';
        ok = ok && same && bound && chain_error.empty();
    }
    const auto icp = solve_icp(instance);
    const std::string icp_error = validate_chain(icp.chain, instance.node_count());
    const bool icp_ok = icp_error.empty() && icp.chain.total_cost() <= icp.trace.initial_cost + 1e-9;
    report << (icp_ok ? "PASS" : "FAIL") << " icp cost=" << icp.chain.total_cost()
           << " initial=" << icp.trace.initial_cost;
    if (!icp_error.empty()) report << " chain: " << icp_error;
    report << '\n';
    ok = ok && icp_ok;
    if (instance.node_count() <= oracle::kMaxExhaustiveNodes) {
        const auto best = oracle::exhaustive_tspd(instance);
        const bool lower = best.cost <= icp.chain.total_cost() + 1e-9;
        report << (lower ? "PASS" : "FAIL") << " exhaustive optimum=" << best.cost
               << " icp/optimum=" << icp.chain.total_cost() / best.cost << '\n';
        ok = ok && lower;
    }
    return ok;
}

struct GenSuite {
    std::string dist = "uniform";
    int n = 100;
    int count = 10;
    std::uint64_t seed = 1;
    double alpha = 2.0;
    std::string range = "unlimited";

    std::vector<std::pair<std::string, Instance>> instances() const {
        std::vector<std::pair<std::string, Instance>> out;
        const auto d = require_distribution(dist);
        const auto f = parse_range(range);
        for (int i = 0; i < count; ++i) {
            const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
            out.emplace_back(dist + "-" + std::to_string(n) + "-" + std::to_string(s), generate(d, n, s, alpha, f));
        }
        return out;
    }
};

void add_suite_options(CLI::App* cmd, GenSuite& suite) {
    cmd->add_option("--dist", suite.dist, "uniform, one_center or two_center");
    cmd->add_option("--n", suite.n, "nodes per instance, depot included")->check(CLI::PositiveNumber);
    cmd->add_option("--count", suite.count, "number of instances")->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", suite.seed, "seed of the first instance");
    cmd->add_option("--alpha", suite.alpha, "truck/drone speed ratio");
    cmd->add_option("--range", suite.range, "flying range percent or 'unlimited'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"TSP-D solver suite"};
    app.require_subcommand(1);

    // gen
    std::string gen_dist, gen_range = "unlimited", gen_out;
    int gen_n = 0;
    std::uint64_t gen_seed = 0;
    double gen_alpha = 2.0;
    auto* gen = app.add_subcommand("gen", "generate a random instance");
    gen->add_option("dist", gen_dist, "uniform, one_center or two_center")->required();
    gen->add_option("n", gen_n, "nodes, depot included")->required();
    gen->add_option("seed", gen_seed, "generator seed")->required();
    gen->add_option("alpha", gen_alpha, "truck/drone speed ratio")->required();
    gen->add_option("range", gen_range, "flying range percent or 'unlimited'")->required();
    gen->add_option("-o,--output", gen_out, "output file (default stdout)");

    // solve
    SolveOptions solve_opt;
    std::string solve_instance, solve_out, solve_trace;
    bool no_timing = false;
    auto* solve = app.add_subcommand("solve", "solve an instance file");
    solve->add_option("instance", solve_instance, "instance JSON")->required()->check(CLI::ExistingFile);
    solve->add_option("--algo", solve_opt.algo, "ep, tspepall, icp or nicp")
        ->check(CLI::IsMember({"ep", "tspepall", "icp", "nicp"}));
    solve->add_option("--predictor", solve_opt.predictor, "oracle, zero, none or a shell command");
    solve->add_option("--max-size", solve_opt.max_size, "maximum chainlet size")->check(CLI::Range(4, 1000));
    solve->add_option("--tour-method", solve_opt.tour_method,
                      "farthest_insertion, nearest_neighbor, cheapest_insertion, random, two_opt_improved");
    solve->add_option("--seed", solve_opt.seed, "seed for the random tour method");
    solve->add_option("-o,--output", solve_out, "solution JSON (default stdout)");
    solve->add_option("--trace", solve_trace, "per-iteration trace CSV");
    solve->add_flag("--no-timing", no_timing, "write zero times to the trace");

    // verify
    std::string verify_instance;
    auto* verify = app.add_subcommand("verify", "check the pruned partitioner against the oracles");
    verify->add_option("instance", verify_instance, "instance JSON")->required()->check(CLI::ExistingFile);

    // profile
    std::string profile_dir, profile_out;
    SolveOptions profile_opt;
    auto* profile = app.add_subcommand("profile", "per-instance ICP profile of a directory of instances");
    profile->add_option("dir", profile_dir, "directory of instance JSON files")->required();
    profile->add_option("--max-size", profile_opt.max_size, "maximum chainlet size")->check(CLI::Range(4, 1000));
    profile->add_option("-o,--output", profile_out, "CSV file (default stdout)");

    // dataset
    GenSuite dataset_suite;
    std::string dataset_out;
    int dataset_max_size = kDefaultMaxChainletSize;
    auto* dataset = app.add_subcommand("dataset", "export (chainlet graph, normalized cost) samples as JSONL");
    add_suite_options(dataset, dataset_suite);
    dataset->add_option("--max-size", dataset_max_size, "maximum chainlet size")->check(CLI::Range(4, 1000));
    dataset->add_option("-o,--output", dataset_out, "JSONL file (default stdout)");

    // bench
    GenSuite bench_suite;
    std::string bench_dir, bench_out, bench_algos = "icp", bench_predictor = "none";
    auto* bench = app.add_subcommand("bench", "summary table of objective, time and gap");
    add_suite_options(bench, bench_suite);
    bench->add_option("--dir", bench_dir, "use instance files from this directory instead of generating");
    bench->add_option("--algos", bench_algos, "comma-separated algorithms");
    bench->add_option("--predictor", bench_predictor, "predictor for nicp");
    bench->add_option("-o,--output", bench_out, "CSV file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            const auto instance = generate(require_distribution(gen_dist), gen_n, gen_seed, gen_alpha,
                                           parse_range(gen_range));
            write_text(gen_out, io::instance_to_json(instance).dump(2) + "\n");
            return 0;
        }

        if (*solve) {
            const auto instance = io::read_instance(solve_instance);
            for (const auto& [a, b] : duplicate_points(instance)) {
                std::cerr << "warning: nodes " << a + 1 << " and " << b + 1 << " share coordinates\n";
            }
            auto outcome = run_solver(instance, solve_opt);
            write_text(solve_out, io::solution_to_json(outcome.chain).dump(2) + "\n");
            if (!solve_trace.empty()) {
                std::ostringstream csv;
                write_trace_csv(csv, outcome.trace, !no_timing);
                write_text(solve_trace, csv.str());
            }
            if (outcome.trace.predictor_failures > 0) {
                std::cerr << "warning: predictor failed on " << outcome.trace.predictor_failures
                          << " batch(es); fell back to direct runs\n";
            }
            return 0;
        }

        if (*verify) {
            const auto instance = io::read_instance(verify_instance);
            const bool ok = run_verify(instance, std::cout);
            std::cout << (ok ? "verify: pass" : "verify: fail") << '\n';
            return ok ? 0 : 1;
        }

        if (*profile) {
            std::ostringstream csv;
            csv << "instance,n,alpha,range,tour_ms,tsp_ep_ms,tsp_ep_all_ms,total_ms,mean_chainlet_size,iterations,"
                   "tsp_ep_all_calls,initial_cost,final_cost\n";
            csv << std::setprecision(10);
            for (const auto& file : instance_files(profile_dir)) {
                const auto instance = io::read_instance(file.string());
                IcpConfig config;
                config.max_size = profile_opt.max_size;
                const auto result = solve_icp(instance, config);
                const auto& t = result.trace;
                const auto f = instance.flying_range_pct();
                csv << file.filename().string() << ',' << instance.node_count() << ',' << instance.alpha() << ','
                    << (f ? std::to_string(*f) : std::string("unlimited")) << ',' << t.tour_ms << ',' << t.ep_ms
                    << ',' << t.tsp_ep_all_ms << ',' << t.total_ms << ',' << t.mean_chainlet_size() << ','
                    << t.iterations.size() << ',' << t.tsp_ep_all_calls << ',' << t.initial_cost << ','
                    << result.chain.total_cost() << '\n';
            }
            write_text(profile_out, csv.str());
            return 0;
        }

        if (*dataset) {
            std::ostringstream rows;
            std::size_t samples = 0;
            for (const auto& [name, instance] : dataset_suite.instances()) {
                const double f_prime = range_feature(instance.flying_range_pct());
                const CostModel& costs = instance.costs();
                IcpConfig config;
                config.max_size = dataset_max_size;
                config.on_fresh_call = [&](std::span<const NodeIndex> path, const EPResult& optimized) {
                    const auto graph = make_chainlet_graph(path, costs, f_prime);
                    rows << io::dataset_row(graph, normalize_cost(optimized.value, graph.scale)).dump() << '\n';
                    ++samples;
                };
                solve_icp(instance, config);
            }
            write_text(dataset_out, rows.str());
            std::cerr << samples << " samples\n";
            return 0;
        }

        if (*bench) {
            std::vector<std::pair<std::string, Instance>> suite;
            if (!bench_dir.empty()) {
                for (const auto& file : instance_files(bench_dir)) {
                    suite.emplace_back(file.filename().string(), io::read_instance(file.string()));
                }
            } else {
                suite = bench_suite.instances();
            }
            std::vector<std::string> algos;
            std::stringstream list(bench_algos);
            for (std::string a; std::getline(list, a, ',');) {
                if (!a.empty()) algos.push_back(a);
            }
            if (algos.empty()) throw std::runtime_error("--algos is empty");

            std::ostringstream csv;
            csv << "instance,n,algo,obj,time_ms,gap_pct,reference\n" << std::setprecision(10);
            for (const auto& [name, instance] : suite) {
                std::vector<SolveOutcome> outcomes;
                for (const auto& algo : algos) {
                    SolveOptions opt;
                    opt.algo = algo;
                    opt.predictor = bench_predictor;
                    outcomes.push_back(run_solver(instance, opt));
                }
                double reference = std::numeric_limits<double>::infinity();
                std::string reference_kind = "best";
                if (instance.node_count() <= oracle::kMaxExhaustiveNodes) {
                    reference = oracle::exhaustive_tspd(instance).cost;
                    reference_kind = "optimum";
                } else {
                    for (const auto& o : outcomes) reference = std::min(reference, o.chain.total_cost());
                }
                for (std::size_t a = 0; a < algos.size(); ++a) {
                    const double obj = outcomes[a].chain.total_cost();
                    const double gap = reference > 0.0 ? 100.0 * (obj - reference) / reference : 0.0;
                    csv << name << ',' << instance.node_count() << ',' << algos[a] << ',' << obj << ','
                        << outcomes[a].ms << ',' << gap << ',' << reference_kind << '\n';
                }
            }
            write_text(bench_out, csv.str());
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

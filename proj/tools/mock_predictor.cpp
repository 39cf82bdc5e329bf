// Scripted predictor process for exercising the wire protocol.
//
//   mock_predictor constant <v>        every cost is v
//   mock_predictor path <factor>       factor * normalized truck length of the input path
//   mock_predictor garbage             replies with a non-JSON line
//   mock_predictor wrong-id            echoes id + 1
//   mock_predictor wrong-count         drops the last cost
//   mock_predictor negative            every cost is -1
//   mock_predictor error               replies {"id": n, "error": "..."}
//   mock_predictor exit                exits without replying
//   mock_predictor flaky <k> <v>       answers constant v except every k-th request, which gets garbage
//
// Every request line is optionally appended to the file named by MOCK_PREDICTOR_LOG.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <json.hpp>

using nlohmann::json;

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: mock_predictor <mode> [args]\n";
        return 2;
    }
    const std::string mode = argv[1];
    const double arg = argc > 2 ? std::atof(argv[2]) : 0.0;
    const double arg2 = argc > 3 ? std::atof(argv[3]) : 0.0;
    std::ofstream log;
    if (const char* path = std::getenv("MOCK_PREDICTOR_LOG")) log.open(path, std::ios::app);

    std::string line;
    long long served = 0;
    while (std::getline(std::cin, line)) {
        ++served;
        if (log) log << line << '\n' << std::flush;
        const json req = json::parse(line);
        const auto id = req["id"].get<long long>();
        const auto& items = req["items"];
        json costs = json::array();
        for (const auto& item : items) {
            if (mode == "path") {
                const auto& ct = item["ct"];
                double len = 0.0;
                for (std::size_t a = 0; a + 1 < ct.size(); ++a) len += ct[a][a + 1].get<double>();
                costs.push_back(arg * len);
            } else if (mode == "negative") {
                costs.push_back(-1.0);
            } else if (mode == "flaky") {
                costs.push_back(arg2);
            } else {
                costs.push_back(arg);
            }
        }
        if (mode == "exit") return 0;
        if (mode == "garbage" || (mode == "flaky" && arg > 0 && served % static_cast<long long>(arg) == 0)) {
            std::cout << "not json" << std::endl;
            continue;
        }
        json reply = {{"id", mode == "wrong-id" ? id + 1 : id}};
        if (mode == "error") {
            reply["error"] = "model unavailable";
        } else {
            if (mode == "wrong-count" && !costs.empty()) costs.erase(costs.size() - 1);
            reply["costs"] = std::move(costs);
        }
        std::cout << reply.dump() << std::endl;
    }
    return 0;
}

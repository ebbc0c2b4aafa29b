// CLI entry points, shared between the binary and the tests.
// Exit codes: 0 success, 1 failed certificate (analyze), 2 validation error,
// 3 simulation error.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace aartilc {

struct SimulateOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> attempts;
    std::string out_dir = "out";
};

struct MonteCarloOptions {
    std::string config_path;
    int runs = 100;
    std::optional<std::uint64_t> seed;
    std::string out_dir = "out";
    int threads = 0;
};

// Runs one campaign; writes campaign.json, attempts.csv and trajectories.csv
// into the output directory.
int cmd_simulate(const SimulateOptions& opts, std::ostream& err);

// Runs the Monte Carlo sweep; writes mc_report.json into the output directory.
int cmd_montecarlo(const MonteCarloOptions& opts, std::ostream& err);

// Prints the convergence certificate for the scenario's offset map, learning
// gains, and declared bounds as JSON. Exit 0 iff the certificate passes.
int cmd_analyze(const std::string& config_path, std::ostream& out, std::ostream& err);

}  // namespace aartilc

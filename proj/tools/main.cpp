// Command-line front end: simulate | montecarlo | analyze.
#include <CLI11.hpp>

#include <iostream>

#include "aartilc/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Probe-drogue docking simulation with terminal iterative learning control"};
    app.require_subcommand(1);

    aartilc::SimulateOptions sim;
    std::uint64_t sim_seed = 0;
    int sim_attempts = 0;
    CLI::App* simulate = app.add_subcommand("simulate", "Run one learning campaign");
    simulate->add_option("config", sim.config_path, "Scenario file")->required();
    CLI::Option* sim_seed_opt =
        simulate->add_option("--seed", sim_seed, "Master seed (default: value from the scenario)");
    CLI::Option* sim_att_opt =
        simulate->add_option("--attempts", sim_attempts, "Override the attempt count");
    simulate->add_option("--out", sim.out_dir, "Output directory (campaign.json, attempts.csv, trajectories.csv)");

    aartilc::MonteCarloOptions mc;
    std::uint64_t mc_seed = 0;
    CLI::App* montecarlo = app.add_subcommand("montecarlo", "Run independent campaigns and aggregate");
    montecarlo->add_option("config", mc.config_path, "Scenario file")->required();
    montecarlo->add_option("--runs", mc.runs, "Number of independent campaigns")->check(CLI::PositiveNumber);
    CLI::Option* mc_seed_opt =
        montecarlo->add_option("--seed", mc_seed, "Master seed (default: value from the scenario)");
    montecarlo->add_option("--out", mc.out_dir, "Output directory (mc_report.json)");
    montecarlo->add_option("--threads", mc.threads, "Worker threads (0 = hardware concurrency)");

    std::string analyze_config;
    CLI::App* analyze = app.add_subcommand("analyze", "Print the convergence certificate as JSON");
    analyze->add_option("config", analyze_config, "Scenario file")->required();

    CLI11_PARSE(app, argc, argv);

    if (simulate->parsed()) {
        if (sim_seed_opt->count() > 0) sim.seed = sim_seed;
        if (sim_att_opt->count() > 0) sim.attempts = sim_attempts;
        return aartilc::cmd_simulate(sim, std::cerr);
    }
    if (montecarlo->parsed()) {
        if (mc_seed_opt->count() > 0) mc.seed = mc_seed;
        return aartilc::cmd_montecarlo(mc, std::cerr);
    }
    return aartilc::cmd_analyze(analyze_config, std::cout, std::cerr);
}

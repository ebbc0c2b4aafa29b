#include "aartilc/cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>

#include "aartilc/exporters.hpp"
#include "aartilc/scenario_config.hpp"

namespace aartilc {

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SimError("cannot write " + path.string());
    out << content;
}

}  // namespace

int cmd_simulate(const SimulateOptions& opts, std::ostream& err) {
    Scenario scenario;
    try {
        scenario = load_scenario(opts.config_path);
        if (opts.seed) scenario.master_seed = *opts.seed;
        if (opts.attempts) scenario.attempts = *opts.attempts;
        scenario.validate();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    }
    try {
        const CampaignResult result = run_campaign(scenario);
        const std::filesystem::path dir(opts.out_dir);
        std::filesystem::create_directories(dir);
        write_file(dir / "campaign.json", campaign_json(result).dump(2) + "\n");
        write_file(dir / "attempts.csv", attempts_csv(result));
        write_file(dir / "trajectories.csv", trajectories_csv(result));
        return 0;
    } catch (const std::exception& e) {
        err << "simulation error: " << e.what() << "\n";
        return 3;
    }
}

int cmd_montecarlo(const MonteCarloOptions& opts, std::ostream& err) {
    Scenario scenario;
    try {
        if (opts.runs < 1) throw ConfigError("--runs must be >= 1");
        scenario = load_scenario(opts.config_path);
        if (opts.seed) scenario.master_seed = *opts.seed;
        scenario.validate();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    }
    try {
        const MonteCarloReport report = monte_carlo(scenario, opts.runs, opts.threads);
        const std::filesystem::path dir(opts.out_dir);
        std::filesystem::create_directories(dir);
        write_file(dir / "mc_report.json", monte_carlo_json(report).dump(2) + "\n");
        return 0;
    } catch (const std::exception& e) {
        err << "simulation error: " << e.what() << "\n";
        return 3;
    }
}

int cmd_analyze(const std::string& config_path, std::ostream& out, std::ostream& err) {
    Scenario scenario;
    try {
        scenario = load_scenario(config_path, /*validate=*/false);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    }
    Certificate cert;
    try {
        cert = certify(scenario.affine_m1, scenario.tilc_gains, scenario.noise.probe_bound,
                       scenario.noise.drogue_bound);
    } catch (const std::exception& e) {
        err << "analysis error: " << e.what() << "\n";
        return 3;
    }
    out << certificate_json(cert).dump(2) << "\n";
    return cert.pass ? 0 : 1;
}

}  // namespace aartilc

// Simulation-level python bindings: scenario loading, campaigns, Monte Carlo.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "aartilc/exporters.hpp"
#include "aartilc/scenario_config.hpp"
#include "aartilc/sim_engine.hpp"

namespace py = pybind11;
using namespace aartilc;

namespace {

py::list vec3_list(const Vec3& v) {
    py::list out;
    out.append(v.x);
    out.append(v.y);
    out.append(v.z);
    return out;
}

py::dict campaign_dict(const CampaignResult& r) {
    py::dict d;
    d["run_seed"] = r.run_seed;
    d["success_rate"] = r.success_rate;
    d["first_success"] = r.first_success;
    d["learning_curve"] = r.learning_curve;
    py::list attempts;
    for (const AttemptLog& a : r.attempts) {
        py::dict row;
        row["k"] = a.index;
        row["success"] = a.success;
        row["timed_out"] = a.timed_out;
        row["terminal_time"] = a.terminal_time;
        row["radial_error"] = a.radial_error;
        row["approach_speed"] = a.approach_speed;
        row["estimated_equilibrium"] = vec3_list(a.estimated_equilibrium);
        row["reference"] = vec3_list(a.reference);
        row["p_dr_terminal"] = vec3_list(a.p_dr_terminal);
        row["p_pr_terminal"] = vec3_list(a.p_pr_terminal);
        row["u_de_dr"] = vec3_list(a.tilc_after.u_de_dr);
        row["u_e_pr"] = vec3_list(a.tilc_after.u_e_pr);
        attempts.append(row);
    }
    d["attempts"] = attempts;
    return d;
}

Scenario load_with_overrides(const std::string& path, std::optional<std::uint64_t> seed,
                             std::optional<int> attempts) {
    Scenario sc = load_scenario(path, /*validate=*/false);
    if (seed) sc.master_seed = *seed;
    if (attempts) sc.attempts = *attempts;
    sc.validate();
    return sc;
}

}  // namespace

void bind_simulation(py::module_& m) {
    m.def(
        "run_campaign",
        [](const std::string& config_path, std::optional<std::uint64_t> seed,
           std::optional<int> attempts) {
            const Scenario sc = load_with_overrides(config_path, seed, attempts);
            py::gil_scoped_release release;
            const CampaignResult result = run_campaign(sc);
            py::gil_scoped_acquire acquire;
            return campaign_dict(result);
        },
        py::arg("config_path"), py::arg("seed") = py::none(), py::arg("attempts") = py::none(),
        "Run one learning campaign from a scenario file.");

    m.def(
        "monte_carlo",
        [](const std::string& config_path, int runs, std::optional<std::uint64_t> seed,
           std::optional<int> attempts, int threads) {
            const Scenario sc = load_with_overrides(config_path, seed, attempts);
            py::gil_scoped_release release;
            const MonteCarloReport report = monte_carlo(sc, runs, threads);
            py::gil_scoped_acquire acquire;
            py::dict d;
            d["runs"] = report.runs;
            d["attempts_per_run"] = report.attempts_per_run;
            d["master_seed"] = report.master_seed;
            d["steady_state_success_rate"] = report.steady_state_success_rate;
            d["steady_state_ci"] =
                py::make_tuple(report.steady_state_ci_low, report.steady_state_ci_high);
            d["steady_state_attempts"] = report.steady_state_attempts;
            d["overall_success_rate"] = report.overall_success_rate;
            d["mean_radial_error"] = report.mean_radial_error;
            d["runs_without_success"] = report.runs_without_success;
            py::list run_rows;
            for (const MonteCarloRunSummary& s : report.run_summaries) {
                py::dict row;
                row["run"] = s.run;
                row["run_seed"] = s.run_seed;
                row["first_success"] = s.first_success;
                row["successes"] = s.successes;
                row["attempts"] = s.attempts;
                row["mean_radial_error"] = s.mean_radial_error;
                run_rows.append(row);
            }
            d["run_summaries"] = run_rows;
            return d;
        },
        py::arg("config_path"), py::arg("runs"), py::arg("seed") = py::none(),
        py::arg("attempts") = py::none(), py::arg("threads") = 0,
        "Run independent campaigns with derived seeds and aggregate.");

    m.def(
        "certify_scenario",
        [](const std::string& config_path) {
            const Scenario sc = load_scenario(config_path, /*validate=*/false);
            const Certificate cert = certify(sc.affine_m1, sc.tilc_gains, sc.noise.probe_bound,
                                             sc.noise.drogue_bound);
            // Round-trip through the canonical JSON form so python and the
            // CLI report identical fields.
            return py::module_::import("json").attr("loads")(certificate_json(cert).dump());
        },
        py::arg("config_path"), "Convergence certificate for a scenario file.");
}

#include "aartilc/exporters.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace aartilc {

std::string format_number(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

namespace {

void append_vec3(std::string& row, const Vec3& v) {
    row += ',';
    row += format_number(v.x);
    row += ',';
    row += format_number(v.y);
    row += ',';
    row += format_number(v.z);
}

nlohmann::json vec3_json(const Vec3& v) { return nlohmann::json::array({v.x, v.y, v.z}); }

nlohmann::json tilc_json(const TilcState& s) {
    return {{"u_de_dr", vec3_json(s.u_de_dr)},
            {"u_e_pr", vec3_json(s.u_e_pr)},
            {"iteration", s.iteration}};
}

}  // namespace

std::string attempts_csv(const CampaignResult& result, int run_id) {
    std::string out = kAttemptsCsvHeader;
    out += '\n';
    for (const AttemptLog& a : result.attempts) {
        std::string row = std::to_string(run_id);
        row += ',';
        row += std::to_string(a.index);
        row += ',';
        row += format_number(a.terminal_time);
        append_vec3(row, a.p_dr_terminal);
        append_vec3(row, a.p_pr_terminal);
        row += ',';
        row += format_number(a.radial_error);
        row += ',';
        row += a.success ? '1' : '0';
        append_vec3(row, a.tilc_after.u_de_dr);
        append_vec3(row, a.tilc_after.u_e_pr);
        out += row;
        out += '\n';
    }
    return out;
}

std::string trajectories_csv(const CampaignResult& result, int run_id) {
    std::string out = kTrajectoriesCsvHeader;
    out += '\n';
    for (const AttemptLog& a : result.attempts) {
        for (const DockingSample& s : a.trajectory) {
            std::string row = std::to_string(run_id);
            row += ',';
            row += std::to_string(a.index);
            row += ',';
            row += format_number(s.t);
            append_vec3(row, s.p_dr);
            append_vec3(row, s.p_pr);
            out += row;
            out += '\n';
        }
    }
    return out;
}

nlohmann::json campaign_json(const CampaignResult& result) {
    nlohmann::json attempts = nlohmann::json::array();
    for (const AttemptLog& a : result.attempts) {
        attempts.push_back({{"k", a.index},
                            {"estimated_equilibrium", vec3_json(a.estimated_equilibrium)},
                            {"reference", vec3_json(a.reference)},
                            {"timed_out", a.timed_out},
                            {"success", a.success},
                            {"terminal_time", a.terminal_time},
                            {"p_dr_terminal", vec3_json(a.p_dr_terminal)},
                            {"p_pr_terminal", vec3_json(a.p_pr_terminal)},
                            {"radial_error", a.radial_error},
                            {"tracking_residual", vec3_json(a.tracking_residual)},
                            {"approach_speed", a.approach_speed},
                            {"tilc_before", tilc_json(a.tilc_before)},
                            {"tilc_after", tilc_json(a.tilc_after)}});
    }
    return {{"schema_version", kSchemaVersion},
            {"run_seed", result.run_seed},
            {"success_rate", result.success_rate},
            {"first_success", result.first_success},
            {"learning_curve", result.learning_curve},
            {"attempts", attempts}};
}

nlohmann::json monte_carlo_json(const MonteCarloReport& report) {
    nlohmann::json runs = nlohmann::json::array();
    for (const MonteCarloRunSummary& s : report.run_summaries) {
        runs.push_back({{"run", s.run},
                        {"run_seed", s.run_seed},
                        {"first_success", s.first_success},
                        {"successes", s.successes},
                        {"attempts", s.attempts},
                        {"mean_radial_error", s.mean_radial_error}});
    }
    return {{"schema_version", kSchemaVersion},
            {"runs", report.runs},
            {"attempts_per_run", report.attempts_per_run},
            {"master_seed", report.master_seed},
            {"steady_state_success_rate", report.steady_state_success_rate},
            {"steady_state_ci", {report.steady_state_ci_low, report.steady_state_ci_high}},
            {"steady_state_attempts", report.steady_state_attempts},
            {"overall_success_rate", report.overall_success_rate},
            {"mean_radial_error", report.mean_radial_error},
            {"runs_without_success", report.runs_without_success},
            {"run_summaries", runs}};
}

nlohmann::json certificate_json(const Certificate& cert) {
    return {{"schema_version", kSchemaVersion},
            {"gains_valid", cert.gains_valid},
            {"gain_violations", cert.gain_violations},
            {"m1_symmetric", cert.m1_symmetric},
            {"m1_negative_definite", cert.m1_negative_definite},
            {"spectral_radius", cert.rho},
            {"spectral_radius_pass", cert.rho_pass},
            {"asymptotic_bound", cert.asymptotic_bound},
            {"spectral_norm", cert.spectral_norm},
            {"conservative_bound", cert.conservative_bound},
            {"conservative_norm", cert.conservative_norm},
            {"pass", cert.pass}};
}

}  // namespace aartilc

// CSV and JSON serialization for campaign results, Monte Carlo reports and
// convergence certificates.
#pragma once

#include <string>

#include <json.hpp>

#include "aartilc/convergence.hpp"
#include "aartilc/sim_engine.hpp"

namespace aartilc {

inline constexpr int kSchemaVersion = 1;

// Fixed, versioned column sets.
inline constexpr const char* kAttemptsCsvHeader =
    "run,k,T,p_dr_T_x,p_dr_T_y,p_dr_T_z,p_pr_T_x,p_pr_T_y,p_pr_T_z,dR_T,success,"
    "u_de_dr_x,u_de_dr_y,u_de_dr_z,u_e_pr_x,u_e_pr_y,u_e_pr_z";
inline constexpr const char* kTrajectoriesCsvHeader =
    "run,k,t,p_dr_x,p_dr_y,p_dr_z,p_pr_x,p_pr_y,p_pr_z";

// 9 significant digits; NaN renders as an empty field (logged as missing).
std::string format_number(double v);

std::string attempts_csv(const CampaignResult& result, int run_id = 0);
std::string trajectories_csv(const CampaignResult& result, int run_id = 0);

nlohmann::json campaign_json(const CampaignResult& result);
nlohmann::json monte_carlo_json(const MonteCarloReport& report);
nlohmann::json certificate_json(const Certificate& cert);

}  // namespace aartilc

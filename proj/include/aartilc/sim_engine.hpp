// Docking-attempt and learning-campaign orchestration: standby observation,
// approach, terminal detection, learning update, Monte Carlo sweeps.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "aartilc/disturbances.hpp"
#include "aartilc/geometry.hpp"
#include "aartilc/hose_drogue.hpp"
#include "aartilc/receiver_autopilot.hpp"
#include "aartilc/rng.hpp"
#include "aartilc/tilc.hpp"
#include "aartilc/vec3.hpp"

namespace aartilc {

// Which plant the campaign runs against. Physical integrates the hose chain
// and the receiver loop; Affine replaces the drogue response with the exact
// terminal-offset map (the oracle tier for convergence experiments).
enum class DisturbanceTier { Physical, Affine };

struct Scenario {
    HoseParams hose;
    ReceiverLinearModel receiver;
    AutopilotGains autopilot;

    DisturbanceTier tier = DisturbanceTier::Physical;
    BowWaveSurrogate bow_wave;
    Vec3 affine_m0{0.25, 0.0, 0.55};  // terminal-offset map constant [m]
    Mat3 affine_m1 = Mat3::diagonal({-0.45, -0.35, -0.2});
    bool affine_allow_asymmetric_m1 = false;
    NoiseSpec noise;

    TilcGains tilc_gains;
    Vec3 warm_start_offset;    // initial drogue-offset estimate [m]
    Vec3 warm_start_tracking;  // initial probe compensation [m]

    double criterion_radius = 0.15;     // R_C [m]
    double standby_offset = 5.0;        // standby distance behind the drogue [m]
    double observation_window = 10.0;   // standby observation time [s]
    double dt = 1e-3;                   // [s]
    double max_attempt_duration = 60.0; // approach timeout [s]
    double approach_penetration = 1.5;  // reference margin past the contact plane [m]
    double drogue_wind_gain = 16.0;     // gust/turbulence wind to drogue force [N/(m/s)]
    double receiver_wind_gain = 40.0;   // gust/turbulence wind to receiver force [N/(m/s)]
    int attempts = 4;
    std::uint64_t master_seed = kDefaultSeed;
    int trajectory_decimation = 10;     // every Nth sample kept in the log

    void validate() const;               // all module validators; throws ConfigError
    DrogueOffsetMap offset_map() const;  // affine map (validates m1)
};

struct AttemptLog {
    int index = 0;                 // k, 0-based
    Vec3 estimated_equilibrium;    // observed p_dr_e0 [m]
    Vec3 reference;                // learning aim point u_hat [m]
    bool timed_out = false;
    bool success = false;
    double terminal_time = 0.0;    // T on the campaign clock [s]; NaN on timeout
    Vec3 p_dr_terminal;            // [m]
    Vec3 p_pr_terminal;            // [m]
    double radial_error = 0.0;     // DR(T) [m]; NaN on timeout
    Vec3 tracking_residual;        // v_pr = u_hat - p_pr(T) [m]
    double approach_speed = 0.0;   // median closure speed over the approach [m/s]
    TilcState tilc_before;
    TilcState tilc_after;
    std::vector<DockingSample> trajectory;  // decimated, full rate near T
};

struct CampaignResult {
    std::vector<AttemptLog> attempts;
    double success_rate = 0.0;
    int first_success = -1;               // attempt index, -1 if none
    std::vector<double> learning_curve;   // DR(T) per attempt (NaN on timeout)
    std::uint64_t run_seed = 0;
};

struct MonteCarloRunSummary {
    int run = 0;
    std::uint64_t run_seed = 0;
    int first_success = -1;
    int successes = 0;
    int attempts = 0;
    double mean_radial_error = 0.0;  // over non-timeout attempts
};

struct MonteCarloReport {
    int runs = 0;
    int attempts_per_run = 0;
    std::uint64_t master_seed = 0;
    // Steady state = attempts strictly after each run's first success.
    double steady_state_success_rate = 0.0;
    double steady_state_ci_low = 0.0;   // 95% normal-approximation interval
    double steady_state_ci_high = 0.0;
    int steady_state_attempts = 0;
    double overall_success_rate = 0.0;
    double mean_radial_error = 0.0;     // steady-state, non-timeout attempts
    int runs_without_success = 0;
    std::vector<MonteCarloRunSummary> run_summaries;
};

// Time-average of the drogue position over an observation window. Requires
// at least two samples spanning >= 1 s; throws InsufficientSamples.
Vec3 estimate_equilibrium(std::span<const DockingSample> window);

// Sequential learning campaign: `attempts` docking attempts sharing one
// learned state, per-attempt seeds derived from the run seed. run_index
// selects the Monte Carlo run slot (0 = the plain single-campaign seed).
CampaignResult run_campaign(const Scenario& scenario, int run_index = 0);

// Independent campaigns with derived seeds, executed on up to `threads`
// workers (0 = hardware concurrency). The report is independent of the
// execution order.
MonteCarloReport monte_carlo(const Scenario& scenario, int runs, int threads = 0);

}  // namespace aartilc

#include "aartilc/sim_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <limits>
#include <mutex>
#include <thread>

#include "aartilc/convergence.hpp"

namespace aartilc {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double median(std::vector<double> v) {
    if (v.empty()) return kNan;
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    return v[mid];
}

}  // namespace

void Scenario::validate() const {
    hose.validate();
    receiver.validate();
    autopilot.validate(receiver);
    bow_wave.validate();
    noise.validate();
    offset_map();  // validates affine_m1

    const auto violations = validate_gains(tilc_gains);
    if (!violations.empty()) throw ConfigError("tilc gains: " + violations.front());
    if (!is_finite(warm_start_offset) || !is_finite(warm_start_tracking))
        throw ConfigError("tilc warm start must be finite");

    if (!(criterion_radius > 0.0)) throw ConfigError("campaign.criterion_radius must be > 0");
    if (!(standby_offset > 0.0)) throw ConfigError("campaign.standby_offset must be > 0");
    if (!(observation_window >= 1.0))
        throw ConfigError("campaign.observation_window must be >= 1 s (equilibrium estimate)");
    if (!(dt > 0.0) || dt > 0.02) throw ConfigError("campaign.dt must lie in (0, 0.02]");
    if (!(max_attempt_duration > 0.0)) throw ConfigError("campaign.max_attempt_duration must be > 0");
    if (!(approach_penetration >= 0.0)) throw ConfigError("campaign.approach_penetration must be >= 0");
    if (!(drogue_wind_gain >= 0.0)) throw ConfigError("disturbances.drogue_wind_gain must be >= 0");
    if (!(receiver_wind_gain >= 0.0)) throw ConfigError("disturbances.receiver_wind_gain must be >= 0");
    if (attempts < 1) throw ConfigError("campaign.attempts must be >= 1");
    if (trajectory_decimation < 1) throw ConfigError("campaign.trajectory_decimation must be >= 1");

    const StabilityReport stability = stability_check(receiver, autopilot);
    if (!stability.stable)
        throw ConfigError("autopilot gains do not stabilize the receiver model (spectral abscissa " +
                          std::to_string(stability.spectral_abscissa) + ")");
}

DrogueOffsetMap Scenario::offset_map() const {
    return DrogueOffsetMap::make(affine_m0, affine_m1, affine_allow_asymmetric_m1);
}

Vec3 estimate_equilibrium(std::span<const DockingSample> window) {
    if (window.size() < 2) throw InsufficientSamples("estimate_equilibrium: need at least two samples");
    if (window.back().t - window.front().t < 1.0 - 1e-9)
        throw InsufficientSamples("estimate_equilibrium: observation window shorter than 1 s");
    Vec3 sum;
    for (const DockingSample& s : window) sum += s.p_dr;
    return sum / static_cast<double>(window.size());
}

namespace {

// Per-campaign mutable context shared across attempts.
struct CampaignContext {
    double t = 0.0;  // campaign clock [s]
    std::uint64_t run_seed = 0;
    bool keep_trajectories = true;

    // Physical tier.
    HoseSimulator hose_sim;
    HoseState hose_state;
    Vec3 standby_anchor;

    // Affine tier.
    Vec3 equilibrium_nominal;
    DrogueOffsetMap offset_map{Vec3{}, Mat3::diagonal({-1, -1, -1})};
    Mat3 i_minus_m1_inv = Mat3::identity();
    BoundedDraws draws;

    explicit CampaignContext(const Scenario& sc) : hose_sim(sc.hose) {}
};

// Receiver closed-loop state in offset coordinates around a per-phase anchor.
struct ReceiverLoop {
    Eigen::VectorXd dx;
    Vec3 e_i;
    Vec3 anchor;

    ReceiverLoop(const Scenario& sc, const Vec3& start_anchor)
        : dx(Eigen::VectorXd::Zero(sc.receiver.n())), anchor(start_anchor) {}

    Vec3 probe_position(const Scenario& sc) const {
        const Eigen::Vector3d p = sc.receiver.c * dx;
        return anchor + Vec3{p(0), p(1), p(2)};
    }

    // Moves the linearization anchor without moving the aircraft.
    void re_anchor(const Scenario& sc, const Vec3& new_anchor) {
        const Vec3 delta = anchor - new_anchor;
        const Eigen::Vector3d d(delta.x, delta.y, delta.z);
        // Shift only the position coordinates: solve C dx_new = C dx + delta
        // by exploiting that C selects position states one-to-one.
        for (int axis = 0; axis < 3; ++axis)
            for (int i = 0; i < sc.receiver.n(); ++i)
                if (sc.receiver.c(axis, i) != 0.0) dx(i) += d(axis) / sc.receiver.c(axis, i);
        anchor = new_anchor;
        e_i = Vec3{};
    }

    void step(const Scenario& sc, const Vec3& reference, const Vec3& wind, double dt) {
        const Eigen::VectorXd du = autopilot_control(dx, e_i, sc.autopilot);
        const Vec3 f_r = sc.receiver_wind_gain * wind;
        dx = receiver_step(dx, du, f_r, dt, sc.receiver);
        e_i = integrator_update(e_i, probe_position(sc), reference, dt, sc.autopilot);
    }
};

AttemptLog run_attempt_physical(const Scenario& sc, CampaignContext& ctx, const TilcState& tilc,
                                int index, std::uint64_t attempt_seed) {
    const double dt = sc.dt;
    TurbulenceStream turb_drogue(derive_seed(attempt_seed, seed_tag::turb_drogue),
                                 sc.noise.turbulence_correlation);
    TurbulenceStream turb_receiver(derive_seed(attempt_seed, seed_tag::turb_receiver),
                                   sc.noise.turbulence_correlation);
    Pcg32 measurement(derive_seed(attempt_seed, seed_tag::measurement));

    AttemptLog log;
    log.index = index;
    log.tilc_before = tilc;

    // Phase 1: standby. The probe holds the anchor while the drogue is
    // observed; the hose keeps whatever motion it carried over.
    ReceiverLoop loop(sc, ctx.standby_anchor);
    std::vector<DockingSample> observation;
    const int standby_steps = static_cast<int>(std::round(sc.observation_window / dt));
    observation.reserve(standby_steps);
    for (int i = 0; i < standby_steps; ++i) {
        const Vec3 gust = gust_velocity(ctx.t, sc.noise.gust);
        const Vec3 drogue_wind = turb_drogue.step(dt, sc.noise.turbulence_intensity) + gust;
        const Vec3 receiver_wind = turb_receiver.step(dt, sc.noise.turbulence_intensity) + gust;

        const Vec3 p_dr = drogue_position(ctx.hose_state, sc.hose);
        const Vec3 p_pr = loop.probe_position(sc);
        const Vec3 f_bow = bow_wave_force(position_error(p_dr, p_pr), sc.bow_wave);
        ctx.hose_sim.step(ctx.hose_state, sc.drogue_wind_gain * drogue_wind, f_bow, dt);
        loop.step(sc, ctx.standby_anchor, receiver_wind, dt);
        ctx.t += dt;
        observation.push_back({ctx.t, drogue_position(ctx.hose_state, sc.hose), loop.probe_position(sc)});
    }

    Vec3 estimate = estimate_equilibrium(observation);
    if (sc.noise.measurement_sigma > 0.0) {
        estimate += sc.noise.measurement_sigma * Vec3{measurement.next_normal(),
                                                      measurement.next_normal(),
                                                      measurement.next_normal()};
    }
    log.estimated_equilibrium = estimate;

    // Phase 2: learning reference, held fixed for the whole attempt. The
    // autopilot is fed the reference plus a forward penetration margin so the
    // probe crosses the contact plane at the commanded closure speed.
    const Vec3 u_hat = compute_reference(estimate, tilc);
    const Vec3 u_cmd = u_hat + Vec3{sc.approach_penetration, 0.0, 0.0};
    log.reference = u_hat;

    // Phase 3: approach until the contact plane crossing or timeout.
    loop.re_anchor(sc, u_cmd);
    const int max_steps = static_cast<int>(std::round(sc.max_attempt_duration / dt));
    const int tail_len = static_cast<int>(std::round(0.5 / dt)) + 2;
    std::deque<DockingSample> tail;
    std::vector<double> x_history;
    x_history.reserve(max_steps + 1);

    DockingSample prev{ctx.t, drogue_position(ctx.hose_state, sc.hose), loop.probe_position(sc)};
    x_history.push_back(prev.p_pr.x);
    std::optional<TerminalEvent> terminal;
    int step_count = 0;
    for (; step_count < max_steps; ++step_count) {
        const Vec3 gust = gust_velocity(ctx.t, sc.noise.gust);
        const Vec3 drogue_wind = turb_drogue.step(dt, sc.noise.turbulence_intensity) + gust;
        const Vec3 receiver_wind = turb_receiver.step(dt, sc.noise.turbulence_intensity) + gust;

        const Vec3 f_bow = bow_wave_force(position_error(prev.p_dr, prev.p_pr), sc.bow_wave);
        ctx.hose_sim.step(ctx.hose_state, sc.drogue_wind_gain * drogue_wind, f_bow, dt);
        loop.step(sc, u_cmd, receiver_wind, dt);
        ctx.t += dt;

        const DockingSample cur{ctx.t, drogue_position(ctx.hose_state, sc.hose),
                                loop.probe_position(sc)};
        x_history.push_back(cur.p_pr.x);
        if (ctx.keep_trajectories) {
            tail.push_back(cur);
            if (static_cast<int>(tail.size()) > tail_len) {
                if (step_count % sc.trajectory_decimation == 0) log.trajectory.push_back(tail.front());
                tail.pop_front();
            }
        }

        const double dx_prev = position_error(prev.p_dr, prev.p_pr).x;
        const double dx_cur = position_error(cur.p_dr, cur.p_pr).x;
        if (dx_prev > 0.0 && dx_cur <= 0.0) {
            const DockingSample bracket[2] = {prev, cur};
            terminal = detect_terminal_time(bracket);
            break;
        }
        prev = cur;
    }

    // Median closure speed over the approach, from 0.1 s position slopes.
    {
        const int lag = std::max(1, static_cast<int>(std::round(0.1 / dt)));
        std::vector<double> speeds;
        speeds.reserve(x_history.size());
        for (std::size_t i = lag; i < x_history.size(); ++i)
            speeds.push_back((x_history[i] - x_history[i - lag]) / (lag * dt));
        log.approach_speed = median(std::move(speeds));
    }

    if (!terminal) {
        log.timed_out = true;
        log.success = false;
        log.terminal_time = kNan;
        log.radial_error = kNan;
        log.tracking_residual = Vec3{kNan, kNan, kNan};
        log.tilc_after = tilc;  // no terminal data, no update
        if (ctx.keep_trajectories)
            log.trajectory.insert(log.trajectory.end(), tail.begin(), tail.end());
        ctx.standby_anchor = estimate - Vec3{sc.standby_offset, 0.0, 0.0};
        return log;
    }

    if (ctx.keep_trajectories) log.trajectory.insert(log.trajectory.end(), tail.begin(), tail.end());

    const DockingOutcome outcome = docking_outcome(*terminal, sc.criterion_radius);
    log.terminal_time = outcome.t;
    log.p_dr_terminal = outcome.p_dr;
    log.p_pr_terminal = outcome.p_pr;
    log.radial_error = outcome.radial_error;
    log.success = outcome.success;
    log.tracking_residual =
        terminal_tracking_error(u_hat, outcome.p_pr, sc.noise.probe_bound);

    AttemptRecord rec;
    rec.p_dr_e0 = estimate;
    rec.p_dr_terminal = outcome.p_dr;
    rec.p_pr_terminal = outcome.p_pr;
    rec.terminal_time = outcome.t;
    if (sc.noise.measurement_sigma > 0.0) {
        const auto jitter = [&] {
            return sc.noise.measurement_sigma * Vec3{measurement.next_normal(),
                                                     measurement.next_normal(),
                                                     measurement.next_normal()};
        };
        rec.p_dr_terminal += jitter();
        rec.p_pr_terminal += jitter();
    }
    log.tilc_after = record_attempt(tilc, rec, sc.tilc_gains);

    ctx.standby_anchor = estimate - Vec3{sc.standby_offset, 0.0, 0.0};
    return log;
}

AttemptLog run_attempt_affine(const Scenario& sc, CampaignContext& ctx, const TilcState& tilc,
                              int index) {
    AttemptLog log;
    log.index = index;
    log.tilc_before = tilc;

    const Vec3 p_e0 = ctx.equilibrium_nominal;
    log.estimated_equilibrium = p_e0;
    const Vec3 u_hat = compute_reference(p_e0, tilc);
    log.reference = u_hat;

    const Vec3 v_dr = ctx.draws.v_dr[index];
    const Vec3 v_pr = ctx.draws.v_pr[index];
    const Vec3 p_pr_terminal = u_hat - v_pr;
    // Terminal balance of the affine map: dp = (I - M1)^-1 (p_e0 + m0 + v_dr - p_pr_T).
    const Vec3 dp = ctx.i_minus_m1_inv * (p_e0 + ctx.offset_map.m0 + v_dr - p_pr_terminal);
    const Vec3 p_dr_terminal = p_pr_terminal + dp;

    ctx.t += sc.observation_window + sc.standby_offset / sc.autopilot.closure_speed;
    log.terminal_time = ctx.t;
    log.p_dr_terminal = p_dr_terminal;
    log.p_pr_terminal = p_pr_terminal;
    log.radial_error = radial_error(dp);
    log.success = log.radial_error < sc.criterion_radius;
    log.tracking_residual = v_pr;
    log.approach_speed = kNan;

    AttemptRecord rec{p_e0, p_dr_terminal, p_pr_terminal, log.terminal_time};
    log.tilc_after = record_attempt(tilc, rec, sc.tilc_gains);
    return log;
}

CampaignResult run_campaign_impl(const Scenario& sc, int run_index, bool keep_trajectories) {
    sc.validate();

    CampaignContext ctx(sc);
    ctx.run_seed = derive_seed(sc.master_seed, seed_tag::run, static_cast<std::uint64_t>(run_index));
    ctx.keep_trajectories = keep_trajectories;

    const auto [eq_state, eq_pos] = solve_equilibrium(sc.hose, {});
    ctx.hose_state = eq_state;
    ctx.equilibrium_nominal = eq_pos;
    ctx.standby_anchor = eq_pos - Vec3{sc.standby_offset, 0.0, 0.0};
    ctx.offset_map = sc.offset_map();
    ctx.i_minus_m1_inv = inverse(Mat3::identity() - ctx.offset_map.m1);
    if (sc.tier == DisturbanceTier::Affine)
        ctx.draws = sample_bounded_draws(derive_seed(ctx.run_seed, seed_tag::affine_noise),
                                         sc.attempts, sc.noise.drogue_bound, sc.noise.probe_bound);

    CampaignResult result;
    result.run_seed = ctx.run_seed;
    TilcState tilc{sc.warm_start_offset, sc.warm_start_tracking, 0};

    int successes = 0;
    for (int k = 0; k < sc.attempts; ++k) {
        AttemptLog log;
        if (sc.tier == DisturbanceTier::Physical) {
            const std::uint64_t attempt_seed =
                derive_seed(ctx.run_seed, seed_tag::attempt, static_cast<std::uint64_t>(k));
            log = run_attempt_physical(sc, ctx, tilc, k, attempt_seed);
        } else {
            log = run_attempt_affine(sc, ctx, tilc, k);
        }
        tilc = log.tilc_after;
        if (log.success) {
            ++successes;
            if (result.first_success < 0) result.first_success = k;
        }
        result.learning_curve.push_back(log.radial_error);
        result.attempts.push_back(std::move(log));
    }
    result.success_rate = static_cast<double>(successes) / sc.attempts;
    return result;
}

}  // namespace

CampaignResult run_campaign(const Scenario& scenario, int run_index) {
    return run_campaign_impl(scenario, run_index, /*keep_trajectories=*/true);
}

MonteCarloReport monte_carlo(const Scenario& scenario, int runs, int threads) {
    if (runs < 1) throw std::invalid_argument("monte_carlo: runs must be >= 1");
    scenario.validate();

    std::vector<MonteCarloRunSummary> summaries(runs);
    std::vector<std::pair<int, bool>> steady;  // filled per run after the join
    std::vector<CampaignResult> results(runs);

    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const int worker_count = std::min<int>(runs, threads > 0 ? threads : static_cast<int>(hw));

    const auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= runs) return;
            try {
                results[i] = run_campaign_impl(scenario, i, /*keep_trajectories=*/false);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(worker_count);
    for (int i = 0; i < worker_count; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);

    MonteCarloReport report;
    report.runs = runs;
    report.attempts_per_run = scenario.attempts;
    report.master_seed = scenario.master_seed;

    int steady_n = 0, steady_success = 0;
    int overall_n = 0, overall_success = 0;
    double steady_radial_sum = 0.0;
    int steady_radial_n = 0;
    for (int i = 0; i < runs; ++i) {
        const CampaignResult& r = results[i];
        MonteCarloRunSummary& s = summaries[i];
        s.run = i;
        s.run_seed = r.run_seed;
        s.first_success = r.first_success;
        s.attempts = static_cast<int>(r.attempts.size());
        double radial_sum = 0.0;
        int radial_n = 0;
        for (const AttemptLog& a : r.attempts) {
            ++overall_n;
            if (a.success) {
                ++s.successes;
                ++overall_success;
            }
            if (!a.timed_out) {
                radial_sum += a.radial_error;
                ++radial_n;
            }
            if (r.first_success >= 0 && a.index > r.first_success) {
                ++steady_n;
                if (a.success) ++steady_success;
                if (!a.timed_out) {
                    steady_radial_sum += a.radial_error;
                    ++steady_radial_n;
                }
            }
        }
        s.mean_radial_error = radial_n > 0 ? radial_sum / radial_n : kNan;
        if (r.first_success < 0) ++report.runs_without_success;
    }

    report.steady_state_attempts = steady_n;
    report.steady_state_success_rate =
        steady_n > 0 ? static_cast<double>(steady_success) / steady_n : 0.0;
    if (steady_n > 0) {
        const double p = report.steady_state_success_rate;
        const double half = 1.96 * std::sqrt(std::max(0.0, p * (1.0 - p) / steady_n));
        report.steady_state_ci_low = std::max(0.0, p - half);
        report.steady_state_ci_high = std::min(1.0, p + half);
    }
    report.overall_success_rate =
        overall_n > 0 ? static_cast<double>(overall_success) / overall_n : 0.0;
    report.mean_radial_error = steady_radial_n > 0 ? steady_radial_sum / steady_radial_n : kNan;
    report.run_summaries = std::move(summaries);
    return report;
}

}  // namespace aartilc

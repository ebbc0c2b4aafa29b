#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "aartilc/convergence.hpp"
#include "aartilc/exporters.hpp"
#include "aartilc/sim_engine.hpp"

using namespace aartilc;

namespace {

// Small, fast scenario used across the engine tests.
Scenario base_scenario() {
    Scenario sc;
    sc.receiver = default_receiver_model();
    sc.autopilot = default_autopilot_gains();
    sc.hose.n_links = 6;
    sc.hose.link_length = 1.5;
    sc.hose.drogue_mass = 18.0;
    sc.observation_window = 1.5;
    sc.attempts = 4;
    sc.noise.probe_bound = 2.0;
    sc.noise.drogue_bound = 0.2;
    return sc;
}

Scenario affine_scenario(double drogue_bound = 0.0, double probe_bound = 0.0) {
    Scenario sc = base_scenario();
    sc.tier = DisturbanceTier::Affine;
    sc.affine_m0 = {0.3, 0.08, -0.6};
    sc.affine_m1 = Mat3::diagonal({-0.5, -0.45, -0.3});
    sc.noise.drogue_bound = drogue_bound;
    sc.noise.probe_bound = probe_bound;
    sc.noise.turbulence_intensity = 0.0;
    return sc;
}

IterationPoint point_from_log(const AttemptLog& log) {
    return {position_error(log.p_dr_terminal, log.p_pr_terminal),
            log.estimated_equilibrium + log.tilc_before.u_de_dr - log.p_pr_terminal};
}

}  // namespace

TEST_CASE("estimate_equilibrium") {
    SUBCASE("constant position is returned exactly") {
        std::vector<DockingSample> w;
        for (int i = 0; i <= 1000; ++i) w.push_back({i * 2e-3, {1.0, -2.0, 10.0}, {}});
        const Vec3 est = estimate_equilibrium(w);
        CHECK(norm(est - Vec3{1.0, -2.0, 10.0}) < 1e-12);
    }
    SUBCASE("whole-period oscillation averages out") {
        std::vector<DockingSample> w;
        const double amp = 0.4, freq = 2.0;  // two whole periods over 1 s
        for (int i = 0; i <= 1000; ++i) {
            const double t = i * 1e-3;
            w.push_back({t, {0.0, amp * std::sin(2 * std::numbers::pi * freq * t), 5.0}, {}});
        }
        const Vec3 est = estimate_equilibrium(w);
        CHECK(std::abs(est.y) < amp / 100.0);
        CHECK(est.z == doctest::Approx(5.0));
    }
    SUBCASE("short or empty windows are rejected") {
        std::vector<DockingSample> none;
        CHECK_THROWS_AS(estimate_equilibrium(none), InsufficientSamples);
        std::vector<DockingSample> brief{{0.0, {}, {}}, {0.5, {}, {}}};
        CHECK_THROWS_AS(estimate_equilibrium(brief), InsufficientSamples);
    }
}

TEST_CASE("scenario validation names the offending key") {
    Scenario sc = base_scenario();
    CHECK_NOTHROW(sc.validate());

    SUBCASE("gain constraint is cited") {
        sc.tilc_gains.k_alpha.x = 1.0;
        try {
            sc.validate();
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("k_alpha") != std::string::npos);
        }
    }
    SUBCASE("dt bounds") {
        sc.dt = 0.05;
        CHECK_THROWS_AS(sc.validate(), ConfigError);
    }
    SUBCASE("unstable autopilot is rejected") {
        sc.autopilot.k_i = -sc.autopilot.k_i;
        CHECK_THROWS_AS(sc.validate(), ConfigError);
    }
    SUBCASE("observation window shorter than the estimator needs") {
        sc.observation_window = 0.5;
        CHECK_THROWS_AS(sc.validate(), ConfigError);
    }
}

TEST_CASE("affine campaign with zero noise equals the recursion elementwise") {
    Scenario sc = affine_scenario();
    sc.attempts = 16;
    const CampaignResult result = run_campaign(sc);
    REQUIRE(result.attempts.size() == 16);

    const AugmentedIteration aug = build_augmented(sc.affine_m1, sc.tilc_gains);
    const ErrorSequence oracle = iterate_recursion(aug, point_from_log(result.attempts[0]), 15);

    for (int k = 0; k < 16; ++k) {
        const IterationPoint sim = point_from_log(result.attempts[k]);
        CHECK(norm(sim.docking_error - oracle.x[k].docking_error) <= 1e-8);
        CHECK(norm(sim.probe_error - oracle.x[k].probe_error) <= 1e-8);
        CHECK(result.attempts[k].radial_error ==
              doctest::Approx(radial_error(oracle.x[k].docking_error)).epsilon(1e-8));
    }

    // Geometric decay all the way down.
    CHECK(aug.rho < 0.7);
    CHECK(norm(point_from_log(result.attempts[15]).docking_error) < 1e-4);
}

TEST_CASE("noisy affine campaign equals the recursion under exact coupling") {
    Scenario sc = affine_scenario(0.05, 0.03);
    sc.attempts = 24;
    const CampaignResult result = run_campaign(sc);

    AugmentedIteration aug = build_augmented(sc.affine_m1, sc.tilc_gains);
    aug.drogue_bound = sc.noise.drogue_bound;
    aug.probe_bound = sc.noise.probe_bound;
    const std::uint64_t run_seed = derive_seed(sc.master_seed, seed_tag::run, 0);
    const BoundedDraws draws = sample_bounded_draws(derive_seed(run_seed, seed_tag::affine_noise),
                                                    sc.attempts, sc.noise.drogue_bound,
                                                    sc.noise.probe_bound);

    const ErrorSequence oracle = iterate_recursion(aug, point_from_log(result.attempts[0]),
                                                   sc.attempts - 1, &draws,
                                                   NoiseCoupling::ExactAffine);
    for (int k = 0; k < sc.attempts; ++k) {
        const IterationPoint sim = point_from_log(result.attempts[k]);
        CHECK(norm(sim.docking_error - oracle.x[k].docking_error) <= 1e-8);
        CHECK(norm(sim.probe_error - oracle.x[k].probe_error) <= 1e-8);
    }
}

TEST_CASE("affine campaign warm-started at the fixed point docks immediately") {
    Scenario sc = affine_scenario();
    sc.warm_start_offset = sc.affine_m0;  // u_de* = m0, u_e* = 0
    sc.attempts = 2;
    const CampaignResult result = run_campaign(sc);
    CHECK(result.attempts[0].success);
    CHECK(result.attempts[0].radial_error < 1e-3);
    CHECK(result.first_success == 0);
}

TEST_CASE("physical campaign without disturbances docks on the first attempt") {
    Scenario sc = base_scenario();
    sc.bow_wave.amplitude = 0.0;
    sc.noise.turbulence_intensity = 0.0;
    sc.attempts = 1;
    const CampaignResult result = run_campaign(sc);
    REQUIRE(result.attempts.size() == 1);
    CHECK_FALSE(result.attempts[0].timed_out);
    CHECK(result.attempts[0].success);
    CHECK(result.attempts[0].radial_error < 0.02);
    // Closure speed within the commanded band.
    CHECK(result.attempts[0].approach_speed > 0.45);
    CHECK(result.attempts[0].approach_speed < 1.05);
}

TEST_CASE("reference equals the learning law applied to the fresh estimate") {
    Scenario sc = base_scenario();
    sc.noise.turbulence_intensity = 0.05;
    sc.attempts = 2;
    const CampaignResult result = run_campaign(sc);
    for (const AttemptLog& a : result.attempts) {
        const Vec3 expect = compute_reference(a.estimated_equilibrium, a.tilc_before);
        CHECK(norm(a.reference - expect) == 0.0);
    }
}

TEST_CASE("timeouts are logged as failures and skip the learning update") {
    Scenario sc = base_scenario();
    sc.max_attempt_duration = 2.0;  // far too short to cover 5 m
    sc.attempts = 2;
    const CampaignResult result = run_campaign(sc);
    REQUIRE(result.attempts.size() == 2);
    for (const AttemptLog& a : result.attempts) {
        CHECK(a.timed_out);
        CHECK_FALSE(a.success);
        CHECK(std::isnan(a.radial_error));
        CHECK(std::isnan(a.terminal_time));
        CHECK(a.tilc_after.iteration == 0);  // never updated
    }
    CHECK(result.first_success == -1);
    CHECK(result.success_rate == 0.0);
}

TEST_CASE("trajectory logs decimate the cruise and keep the terminal neighbourhood dense") {
    Scenario sc = base_scenario();
    sc.attempts = 1;
    sc.trajectory_decimation = 10;
    const CampaignResult result = run_campaign(sc);
    const AttemptLog& a = result.attempts[0];
    REQUIRE_FALSE(a.timed_out);
    REQUIRE(a.trajectory.size() > 100);

    // Sample spacing: decimated early, full step rate in the last half
    // second before contact.
    const double T = a.terminal_time;
    int dense = 0;
    for (std::size_t i = 1; i < a.trajectory.size(); ++i) {
        const double gap = a.trajectory[i].t - a.trajectory[i - 1].t;
        CHECK(gap > 0.0);
        if (a.trajectory[i].t > T - 0.4) {
            CHECK(gap == doctest::Approx(sc.dt).epsilon(1e-6));
            ++dense;
        }
    }
    CHECK(dense > 300);
    // The log ends at the last pre-contact sample.
    CHECK(a.trajectory.back().t <= T + sc.dt);
    CHECK(a.trajectory.back().t >= T - 2.0 * sc.dt);
}

TEST_CASE("campaigns are deterministic in every logged field") {
    Scenario sc = base_scenario();
    sc.noise.turbulence_intensity = 0.1;
    sc.attempts = 2;
    const CampaignResult a = run_campaign(sc);
    const CampaignResult b = run_campaign(sc);
    CHECK(attempts_csv(a) == attempts_csv(b));
    CHECK(trajectories_csv(a) == trajectories_csv(b));
    CHECK(campaign_json(a).dump() == campaign_json(b).dump());

    Scenario other = sc;
    other.master_seed = sc.master_seed + 1;
    const CampaignResult c = run_campaign(other);
    CHECK(attempts_csv(a) != attempts_csv(c));
}

TEST_CASE("monte carlo aggregates deterministically and ignores thread count") {
    Scenario sc = affine_scenario(0.04, 0.02);
    sc.attempts = 6;
    const MonteCarloReport one = monte_carlo(sc, 8, 1);
    const MonteCarloReport two = monte_carlo(sc, 8, 2);
    CHECK(monte_carlo_json(one).dump() == monte_carlo_json(two).dump());
    CHECK(one.runs == 8);
    CHECK(one.run_summaries.size() == 8);

    // Zero-noise steady state is perfect docking.
    Scenario clean = affine_scenario();
    clean.attempts = 6;
    const MonteCarloReport noiseless = monte_carlo(clean, 4, 2);
    CHECK(noiseless.steady_state_success_rate == 1.0);
}

TEST_CASE("monte carlo run 0 equals the single campaign") {
    Scenario sc = affine_scenario(0.04, 0.02);
    sc.attempts = 5;
    const MonteCarloReport report = monte_carlo(sc, 1, 1);
    const CampaignResult single = run_campaign(sc, 0);
    REQUIRE(report.run_summaries.size() == 1);
    const MonteCarloRunSummary& s = report.run_summaries[0];
    CHECK(s.run_seed == single.run_seed);
    CHECK(s.first_success == single.first_success);
    CHECK(s.attempts == static_cast<int>(single.attempts.size()));
    int successes = 0;
    for (const AttemptLog& a : single.attempts) successes += a.success ? 1 : 0;
    CHECK(s.successes == successes);
}

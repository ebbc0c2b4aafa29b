#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "aartilc/convergence.hpp"
#include "aartilc/tilc.hpp"
#include "test_support.hpp"

using namespace aartilc;

TEST_CASE("validate_gains matches the convergence constraints exactly") {
    // Boundary-inclusive ends: k_alpha may be 0, k_p may be 1.
    CHECK(validate_gains({{0, 0, 0}, {1, 1, 1}}).empty());
    CHECK(validate_gains({{0.2, 0.2, 0.2}, {0.8, 0.8, 0.8}}).empty());

    // Strict ends: k_alpha < 1, k_p > 0.
    CHECK(validate_gains({{1.0, 0, 0}, {1, 1, 1}}).size() == 1);
    CHECK(validate_gains({{0, 0, 0}, {1, 0.0, 1}}).size() == 1);
    CHECK(validate_gains({{-0.1, 0, 1.2}, {0, 1, 1}}).size() == 3);
}

TEST_CASE("compute_reference sums the three terms and stays fixed") {
    TilcState zero;
    const Vec3 p_e0{0, 0, 10};
    CHECK(norm(compute_reference(p_e0, zero) - p_e0) == 0.0);

    TilcState s{{0, 0.1, -0.05}, {0.02, 0, 0}, 3};
    const Vec3 ref = compute_reference(p_e0, s);
    CHECK(ref.x == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(ref.y == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(ref.z == doctest::Approx(9.95).epsilon(1e-12));
    // Fixed per attempt: repeated queries agree bitwise.
    const Vec3 again = compute_reference(p_e0, s);
    CHECK(norm(ref - again) == 0.0);
}

TEST_CASE("update_offset_estimate is the convex low-pass update") {
    AttemptRecord rec;
    rec.p_dr_e0 = {0, 0, 10};
    rec.p_dr_terminal = {0.4, 0, 10};  // observed offset (0.4, 0, 0)

    TilcState s;
    s.u_de_dr = {0.2, 0, 0};
    SUBCASE("k_alpha = 0 adopts the observation outright") {
        const Vec3 u = update_offset_estimate(s, rec, {{0, 0, 0}, {1, 1, 1}});
        CHECK(u.x == doctest::Approx(0.4).epsilon(1e-12));
    }
    SUBCASE("k_alpha = 0.5 blends halfway") {
        const Vec3 u = update_offset_estimate(s, rec, {{0.5, 0.5, 0.5}, {1, 1, 1}});
        CHECK(u.x == doctest::Approx(0.3).epsilon(1e-12));
        CHECK(u.y == 0.0);
        CHECK(u.z == 0.0);
    }
    SUBCASE("invalid gains are rejected") {
        CHECK_THROWS_AS(update_offset_estimate(s, rec, {{1.0, 0, 0}, {1, 1, 1}}),
                        std::invalid_argument);
    }
}

TEST_CASE("offset estimate converges geometrically to a constant observation") {
    // Scalar recursion oracle: u(k) = ka*u(k-1) + (1-ka)*c has error ratio ka.
    const double ka = 0.35, c = 0.7;
    TilcGains g{{ka, ka, ka}, {1, 1, 1}};
    AttemptRecord rec;
    rec.p_dr_e0 = {0, 0, 0};
    rec.p_dr_terminal = {c, 0, 0};

    TilcState s;
    double expected = 0.0;
    for (int k = 0; k < 30; ++k) {
        s.u_de_dr = update_offset_estimate(s, rec, g);
        expected = ka * expected + (1.0 - ka) * c;
        CHECK(s.u_de_dr.x == doctest::Approx(expected).epsilon(1e-12));
    }
    CHECK(std::abs(s.u_de_dr.x - c) <= std::pow(ka, 30) * c * 1.0001);
}

TEST_CASE("update_probe_compensation accumulates the terminal tracking error") {
    TilcGains g{{0, 0, 0}, {0.5, 0.5, 0.5}};
    AttemptRecord rec;
    rec.p_dr_e0 = {0, 0, 0};
    rec.p_pr_terminal = {-0.1, 0.2, 0};  // e_pr = (0.1, -0.2, 0)

    TilcState s;
    const Vec3 u = update_probe_compensation(s, rec, g);
    CHECK(u.x == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(u.y == doctest::Approx(-0.1).epsilon(1e-12));
    CHECK(u.z == 0.0);

    SUBCASE("zero error is a fixed point") {
        AttemptRecord perfect;
        perfect.p_dr_e0 = {1, 2, 3};
        perfect.p_pr_terminal = {1, 2, 3};
        TilcState held{{0, 0, 0}, {0.3, -0.4, 0.1}, 0};
        const Vec3 kept = update_probe_compensation(held, perfect, g);
        CHECK(norm(kept - held.u_e_pr) == 0.0);
    }
    SUBCASE("deadbeat k_p = 1 absorbs a constant bias in one step") {
        TilcGains deadbeat{{0, 0, 0}, {1, 1, 1}};
        // Plant: probe always lands bias short of (p_e0 + u_de + u_e).
        const Vec3 bias{0.05, -0.03, 0.08};
        TilcState t;
        for (int k = 0; k < 2; ++k) {
            AttemptRecord r;
            r.p_dr_e0 = {0, 0, 5};
            r.p_dr_terminal = r.p_dr_e0;
            r.p_pr_terminal = compute_reference(r.p_dr_e0, t) - bias;
            t = record_attempt(t, r, deadbeat);
        }
        // After one step u_e_pr = bias, so the second error is zero.
        CHECK(norm(t.u_e_pr - bias) <= 1e-12);
    }
}

TEST_CASE("record_attempt keeps a perfect attempt at zero and counts iterations") {
    TilcGains g;
    TilcState s;
    AttemptRecord rec;
    rec.p_dr_e0 = {0, 0, 10};
    rec.p_dr_terminal = rec.p_dr_e0;
    rec.p_pr_terminal = rec.p_dr_e0;
    const TilcState next = record_attempt(s, rec, g);
    CHECK(norm(next.u_de_dr) == 0.0);
    CHECK(norm(next.u_e_pr) == 0.0);
    CHECK(next.iteration == 1);

    // Deterministic: same inputs, same outputs.
    const TilcState again = record_attempt(s, rec, g);
    CHECK(norm(again.u_de_dr - next.u_de_dr) == 0.0);
    CHECK(norm(again.u_e_pr - next.u_e_pr) == 0.0);
}

TEST_CASE("updates are axis-decoupled under diagonal gains") {
    Pcg32 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const TilcGains g = testing::random_valid_gains(rng, 1e-2);
        TilcState s{{rng.next_symmetric(), rng.next_symmetric(), rng.next_symmetric()},
                    {rng.next_symmetric(), rng.next_symmetric(), rng.next_symmetric()},
                    0};
        AttemptRecord rec;
        rec.p_dr_e0 = {rng.next_symmetric(), rng.next_symmetric(), rng.next_symmetric()};
        rec.p_dr_terminal = {rng.next_symmetric(), rng.next_symmetric(), rng.next_symmetric()};
        rec.p_pr_terminal = {rng.next_symmetric(), rng.next_symmetric(), rng.next_symmetric()};

        const TilcState base = record_attempt(s, rec, g);
        AttemptRecord bumped = rec;
        bumped.p_dr_terminal.y += 0.5;  // perturb only axis 1 of one input
        const TilcState pert = record_attempt(s, bumped, g);
        CHECK(pert.u_de_dr.x == base.u_de_dr.x);
        CHECK(pert.u_de_dr.z == base.u_de_dr.z);
        CHECK(pert.u_e_pr.x == base.u_e_pr.x);
        CHECK(pert.u_e_pr.z == base.u_e_pr.z);
        CHECK(pert.u_de_dr.y != base.u_de_dr.y);
    }
}

TEST_CASE("warm start offsets the first reference") {
    TilcState warm{{0.1, -0.2, 0.3}, {0, 0, 0}, 0};
    const Vec3 ref = compute_reference({0, 0, 10}, warm);
    CHECK(ref.x == doctest::Approx(0.1));
    CHECK(ref.y == doctest::Approx(-0.2));
    CHECK(ref.z == doctest::Approx(10.3));
}

namespace {

// Minimal affine plant: given the reference, returns terminal positions per
// the offset map with optional bounded noise. Solves the implicit affine
// fixed point for Dp(T) exactly.
struct AffinePlant {
    Vec3 p_e0;
    Vec3 m0;
    Mat3 m1;

    struct Terminal {
        Vec3 p_dr, p_pr, dp;
    };

    Terminal attempt(const TilcState& s, const Vec3& v_dr = {}, const Vec3& v_pr = {}) const {
        const Vec3 u_hat = compute_reference(p_e0, s);
        const Vec3 p_pr_t = u_hat - v_pr;
        const Mat3 i_minus_m1 = Mat3::identity() - m1;
        const Vec3 dp = inverse(i_minus_m1) * (p_e0 + m0 + v_dr - p_pr_t);
        return {p_pr_t + dp, p_pr_t, dp};
    }
};

}  // namespace

TEST_CASE("affine learning loop equals the augmented recursion exactly") {
    // The central bookkeeping identity: driving record_attempt with the
    // affine plant reproduces X(k) = A^k X(0) elementwise.
    Pcg32 rng(17);
    for (int trial = 0; trial < 25; ++trial) {
        AffinePlant plant;
        plant.p_e0 = {0, 0, 12};
        plant.m0 = {0.4 * rng.next_symmetric(), 0.4 * rng.next_symmetric(), 0.4 * rng.next_symmetric()};
        plant.m1 = testing::random_symmetric_negative_definite(rng, 0.05, 0.9);
        const TilcGains gains = testing::random_valid_gains(rng, 0.05);

        const AugmentedIteration aug = build_augmented(plant.m1, gains);

        TilcState s;
        std::vector<IterationPoint> simulated;
        for (int k = 0; k < 12; ++k) {
            const auto term = plant.attempt(s);
            // e_pr as defined from the attempt's own offset estimate.
            const Vec3 e_pr = plant.p_e0 + s.u_de_dr - term.p_pr;
            simulated.push_back({term.dp, e_pr});
            s = record_attempt(s, {plant.p_e0, term.p_dr, term.p_pr, 0.0}, gains);
        }

        const ErrorSequence oracle = iterate_recursion(aug, simulated[0], 11);
        for (int k = 0; k < 12; ++k) {
            CHECK(norm(simulated[k].docking_error - oracle.x[k].docking_error) <= 1e-10);
            CHECK(norm(simulated[k].probe_error - oracle.x[k].probe_error) <= 1e-10);
        }
    }
}

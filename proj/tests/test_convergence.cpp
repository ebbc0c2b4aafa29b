#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "aartilc/convergence.hpp"
#include "test_support.hpp"

using namespace aartilc;

namespace {

Mat3 scalar3(double v) { return Mat3::diagonal({v, v, v}); }

}  // namespace

TEST_CASE("build_augmented reproduces the scalar block formulas") {
    SUBCASE("m1 = -0.5, ka = 0.5, kp = 0.5") {
        const AugmentedIteration it = build_augmented(scalar3(-0.5), {{0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}});
        CHECK(it.a1(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
        CHECK(max_abs(it.a2) == doctest::Approx(0.0));
        CHECK(it.a3(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(it.rho == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    }
    SUBCASE("m1 = -1, ka = 0, kp = 1") {
        const AugmentedIteration it = build_augmented(scalar3(-1.0), {{0, 0, 0}, {1, 1, 1}});
        CHECK(it.a1(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(max_abs(it.a2) == doctest::Approx(0.0));
        CHECK(max_abs(it.a3) == doctest::Approx(0.0));
        CHECK(it.rho == doctest::Approx(0.5).epsilon(1e-9));
    }
    SUBCASE("kp + ka = 1 zeroes the coupling block for any valid m1") {
        Pcg32 rng(5);
        for (int i = 0; i < 50; ++i) {
            const Mat3 m1 = testing::random_symmetric_negative_definite(rng);
            const double ka = rng.next_double() * 0.999;
            const AugmentedIteration it =
                build_augmented(m1, {{ka, ka, ka}, {1 - ka, 1 - ka, 1 - ka}});
            CHECK(max_abs(it.a2) <= 1e-14);
        }
    }
    SUBCASE("singular m1 - I is rejected") {
        CHECK_THROWS_AS(build_augmented(scalar3(1.0), TilcGains{}), SingularMatrix);
    }
    SUBCASE("invalid gains are rejected") {
        CHECK_THROWS_AS(build_augmented(scalar3(-0.5), {{1.0, 0, 0}, {1, 1, 1}}),
                        std::invalid_argument);
    }
}

TEST_CASE("spectral_radius handles simple exact cases") {
    CHECK(spectral_radius(Mat6::identity()) == doctest::Approx(1.0).epsilon(1e-12));

    Mat<2> d;
    d(0, 0) = 2.0 / 3.0;
    d(1, 1) = 0.5;
    CHECK(spectral_radius(d) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    Mat<2> zero;
    CHECK(spectral_radius(zero) == 0.0);

    // Nilpotent: strictly upper triangular.
    Mat<3> nil;
    nil(0, 1) = 4.0;
    nil(1, 2) = -2.0;
    CHECK(spectral_radius(nil) == 0.0);

    // Complex dominant pair: scaled rotation in a 2D block.
    Mat<3> rot;
    const double c = std::cos(0.7), s = std::sin(0.7);
    rot(0, 0) = 0.9 * c;
    rot(0, 1) = -0.9 * s;
    rot(1, 0) = 0.9 * s;
    rot(1, 1) = 0.9 * c;
    rot(2, 2) = 0.3;
    CHECK(spectral_radius(rot) == doctest::Approx(0.9).epsilon(1e-10));

    // Equal moduli with opposite signs.
    Mat<2> pm;
    pm(0, 0) = 0.8;
    pm(1, 1) = -0.8;
    CHECK(spectral_radius(pm) == doctest::Approx(0.8).epsilon(1e-10));
}

TEST_CASE("spectral_radius of block-triangular matrices is the block max") {
    Pcg32 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        Mat6 a;
        Mat3 a1, a3;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                a1(i, j) = rng.next_symmetric();
                a3(i, j) = rng.next_symmetric();
                a(i, j) = a1(i, j);
                a(i, j + 3) = 2.0 * rng.next_symmetric();
                a(i + 3, j + 3) = a3(i, j);
            }
        const double mine = spectral_radius(a);
        const double blocks =
            std::max(testing::eigen_spectral_radius(a1), testing::eigen_spectral_radius(a3));
        CHECK(mine == doctest::Approx(blocks).epsilon(1e-8));
        // Cross-check against the dense eigensolve of the full matrix too.
        CHECK(mine == doctest::Approx(testing::eigen_spectral_radius(a)).epsilon(1e-8));
    }
}

TEST_CASE("spectral_radius agrees with a dense eigensolve on random matrices") {
    Pcg32 rng(9);
    for (int trial = 0; trial < 300; ++trial) {
        Mat6 a;
        const double scale = std::exp(2.0 * rng.next_symmetric());
        for (double& v : a.a) v = scale * rng.next_symmetric();
        const double mine = spectral_radius(a);
        const double oracle = testing::eigen_spectral_radius(a);
        CHECK(std::abs(mine - oracle) <= 1e-9 * std::max(1.0, oracle));
    }
}

TEST_CASE("asymptotic_error_bound") {
    CHECK(asymptotic_error_bound(0, 0) == 0.0);
    CHECK(asymptotic_error_bound(0.03, 0.04) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(asymptotic_error_bound(0.25, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(asymptotic_error_bound(-0.1, 0), std::invalid_argument);
}

TEST_CASE("iterate_recursion matches hand iteration on the diagonal case") {
    const AugmentedIteration it = build_augmented(scalar3(-0.5), {{0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}});
    // Per axis: A = diag(2/3, 0.5), X0 = (0.5, 0.2).
    const IterationPoint x0{{0.5, 0.5, 0.5}, {0.2, 0.2, 0.2}};
    const ErrorSequence seq = iterate_recursion(it, x0, 2);
    CHECK(seq.x.size() == 3);
    CHECK(seq.x[1].docking_error.x == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(seq.x[1].probe_error.x == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(seq.x[2].docking_error.x == doctest::Approx(2.0 / 9.0).epsilon(1e-12));
    CHECK(seq.x[2].probe_error.x == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("iterate_recursion from zero stays zero and decays geometrically otherwise") {
    const AugmentedIteration it = build_augmented(scalar3(-0.5), {{0.2, 0.2, 0.2}, {0.8, 0.8, 0.8}});
    const ErrorSequence zero = iterate_recursion(it, IterationPoint{}, 10);
    for (const auto& p : zero.x) {
        CHECK(norm(p.docking_error) == 0.0);
        CHECK(norm(p.probe_error) == 0.0);
    }

    // rho < 0.7 for these gains, so 40 iterations shrink the state below 1e-6.
    CHECK(it.rho < 0.7);
    const IterationPoint x0{{0.5, 0.3, -0.4}, {0.1, -0.2, 0.05}};
    const ErrorSequence seq = iterate_recursion(it, x0, 40);
    const double n0 = std::hypot(norm(x0.docking_error), norm(x0.probe_error));
    const auto& last = seq.x.back();
    CHECK(std::hypot(norm(last.docking_error), norm(last.probe_error)) < 1e-6 * n0);
}

TEST_CASE("iterate_recursion equals repeated squaring with zero noise") {
    Pcg32 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const Mat3 m1 = testing::random_symmetric_negative_definite(rng);
        const TilcGains g = testing::random_valid_gains(rng, 1e-2);
        const AugmentedIteration it = build_augmented(m1, g);
        const IterationPoint x0{{rng.next_symmetric(), rng.next_symmetric(), rng.next_symmetric()},
                                {rng.next_symmetric(), rng.next_symmetric(), rng.next_symmetric()}};
        const int k = 1 + static_cast<int>(rng.next_double() * 30);
        const ErrorSequence seq = iterate_recursion(it, x0, k);

        const Mat6 ak = testing::matrix_power(it.a, k);
        const std::array<double, 6> x{x0.docking_error.x, x0.docking_error.y, x0.docking_error.z,
                                      x0.probe_error.x, x0.probe_error.y, x0.probe_error.z};
        const auto xk = ak * x;
        CHECK(std::abs(seq.x[k].docking_error.x - xk[0]) <= 1e-10);
        CHECK(std::abs(seq.x[k].docking_error.y - xk[1]) <= 1e-10);
        CHECK(std::abs(seq.x[k].docking_error.z - xk[2]) <= 1e-10);
        CHECK(std::abs(seq.x[k].probe_error.x - xk[3]) <= 1e-10);
        CHECK(std::abs(seq.x[k].probe_error.y - xk[4]) <= 1e-10);
        CHECK(std::abs(seq.x[k].probe_error.z - xk[5]) <= 1e-10);
    }
}

TEST_CASE("noisy recursion respects declared bounds") {
    AugmentedIteration it = build_augmented(scalar3(-0.5), TilcGains{});
    it.drogue_bound = 0.05;
    it.probe_bound = 0.03;
    const BoundedDraws draws = sample_bounded_draws(99, 21, it.drogue_bound, it.probe_bound);
    for (const auto& v : draws.v_dr) CHECK(norm(v) <= it.drogue_bound + 1e-15);
    for (const auto& v : draws.v_pr) CHECK(norm(v) <= it.probe_bound + 1e-15);
    CHECK_NOTHROW(iterate_recursion(it, IterationPoint{}, 20, &draws));

    BoundedDraws bad = draws;
    bad.v_dr[3] = {0.2, 0, 0};
    CHECK_THROWS_AS(iterate_recursion(it, IterationPoint{}, 20, &bad), NoiseBoundViolation);

    // Same seed, same draws.
    const BoundedDraws again = sample_bounded_draws(99, 21, it.drogue_bound, it.probe_bound);
    for (std::size_t i = 0; i < draws.v_dr.size(); ++i) {
        CHECK(norm(draws.v_dr[i] - again.v_dr[i]) == 0.0);
        CHECK(norm(draws.v_pr[i] - again.v_pr[i]) == 0.0);
    }
}

TEST_CASE("spectral radius stays below one across random valid configurations") {
    // Down-scaled version of the acceptance sweep (the acceptance suite runs
    // the full 10,000).
    Pcg32 rng(23);
    for (int trial = 0; trial < 2000; ++trial) {
        const Mat3 m1 = testing::random_symmetric_negative_definite(rng, 1e-3, 10.0);
        const TilcGains g = testing::random_valid_gains(rng);
        const AugmentedIteration it = build_augmented(m1, g);
        CHECK(it.rho < 1.0);
    }
}

TEST_CASE("certify reports the full checklist") {
    SUBCASE("valid symmetric case passes with both bounds") {
        const Certificate c = certify(scalar3(-0.5), {{0.2, 0.2, 0.2}, {0.8, 0.8, 0.8}}, 0.03, 0.04);
        CHECK(c.gains_valid);
        CHECK(c.m1_symmetric);
        CHECK(c.m1_negative_definite);
        CHECK(c.rho == doctest::Approx((0.5 + 0.2) / 1.5).epsilon(1e-9));
        CHECK(c.rho_pass);
        CHECK(c.asymptotic_bound == doctest::Approx(0.1).epsilon(1e-12));
        CHECK(c.conservative_norm == "spectral");
        CHECK(c.conservative_bound == doctest::Approx(0.1 / (1.0 - c.spectral_norm)).epsilon(1e-9));
        CHECK(c.pass);
    }
    SUBCASE("m1 = -5 I with ka = 0, kp = 1 gives rho 5/6") {
        const Certificate c = certify(scalar3(-5.0), {{0, 0, 0}, {1, 1, 1}}, 0, 0);
        CHECK(c.rho == doctest::Approx(5.0 / 6.0).epsilon(1e-9));
        CHECK(c.pass);
    }
    SUBCASE("gain violation fails the certificate") {
        const Certificate c = certify(scalar3(-0.5), {{1.0, 0.2, 0.2}, {0.8, 0.8, 0.8}}, 0, 0);
        CHECK_FALSE(c.gains_valid);
        CHECK_FALSE(c.pass);
    }
    SUBCASE("positive definite m1 fails") {
        const Certificate c = certify(scalar3(0.2), TilcGains{}, 0, 0);
        CHECK_FALSE(c.m1_negative_definite);
        CHECK_FALSE(c.pass);
    }
    SUBCASE("spectral norm >= 1 falls back to the lyapunov norm") {
        // Weak gains blow up the coupling block: ||A||_2 > 1 while rho < 1.
        const Certificate c =
            certify(scalar3(-0.001), {{0, 0, 0}, {0.001, 0.001, 0.001}}, 0.01, 0.01);
        CHECK(c.rho_pass);
        CHECK(c.spectral_norm >= 1.0);
        CHECK(c.conservative_norm == "lyapunov");
        CHECK(c.conservative_bound > c.asymptotic_bound);
        CHECK(std::isfinite(c.conservative_bound));
    }
}

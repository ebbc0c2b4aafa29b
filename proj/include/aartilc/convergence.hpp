// Between-attempt convergence analysis for the terminal learning loop.
//
// The learned docking error and probe error evolve across attempts as an
// augmented linear iteration
//     X(k) = A X(k-1) + v(k-1),      X = [docking_error; probe_error]
// with block matrix A = [[A1, A2], [0, A3]],
//     A1 = (M1 - I)^-1 (M1 - K_alpha)
//     A2 = (M1 - I)^-1 (K_p + K_alpha - I)
//     A3 = I - K_p.
// rho(A) < 1 certifies geometric convergence; with bounded terminal noise
// the error converges into a band. This module builds A, estimates rho(A)
// with an iterative eigensolver, computes the noise bounds, and iterates the
// recursion directly as the oracle for the full simulation.
#pragma once

#include <string>
#include <vector>

#include "aartilc/errors.hpp"
#include "aartilc/mat.hpp"
#include "aartilc/tilc.hpp"
#include "aartilc/vec3.hpp"

namespace aartilc {

struct AugmentedIteration {
    Mat3 a1, a2, a3;
    Mat6 a;                // [[A1, A2], [0, A3]]
    Mat3 m1_minus_i_inv;   // (M1 - I)^-1, maps raw drogue noise into the recursion
    double rho = 0.0;      // spectral radius of a
    double probe_bound = 0.0;   // B_pr [m]
    double drogue_bound = 0.0;  // B_dr [m]
    double asymptotic_bound = 0.0;   // 2 sqrt(B_pr^2 + B_dr^2) [m]
};

// Assembles the augmented iteration from the offset-map Jacobian and the
// learning gains. Gains must be valid; throws SingularMatrix if (M1 - I) is
// not invertible (cannot happen for a negative definite M1 — guards misuse).
AugmentedIteration build_augmented(const Mat3& m1, const TilcGains& gains);

// Largest eigenvalue modulus of a real square matrix: Householder reduction
// to Hessenberg form, then the shifted QR iteration, deflating converged
// eigenvalues (real or complex pairs) off the bottom of the active block.
// Accurate to ~1e-9 on the 6x6 iteration matrices; throws NoConvergence past
// the iteration cap.
template <int N>
double spectral_radius(const Mat<N>& a, int max_iter = 20000);

extern template double spectral_radius(const Mat<2>&, int);
extern template double spectral_radius(const Mat<3>&, int);
extern template double spectral_radius(const Mat<6>&, int);

// Asymptotic band the bounded terminal disturbances drive the docking error
// into: 2 sqrt(B_pr^2 + B_dr^2).
double asymptotic_error_bound(double probe_bound, double drogue_bound);

// One augmented state: docking error Dp(T) and probe terminal error e_pr.
struct IterationPoint {
    Vec3 docking_error;
    Vec3 probe_error;
};

// Raw bounded disturbance draws, one pair per attempt index.
struct BoundedDraws {
    std::vector<Vec3> v_dr;  // ||v_dr[k]|| <= B_dr
    std::vector<Vec3> v_pr;  // ||v_pr[k]|| <= B_pr
};

// Deterministic bounded draws: uniform directions, radii uniform in the ball
// (or pinned to the bound sphere when adversarial = true).
BoundedDraws sample_bounded_draws(std::uint64_t seed, int count, double drogue_bound,
                                  double probe_bound, bool adversarial = false);

// How raw (v_dr, v_pr) draws enter the recursion's noise term v(k-1).
// Decoupled keeps the rows separate: the drogue difference mapped through
// (M1 - I)^-1 on top, the plain probe difference below. ExactAffine adds the
// probe difference to the docking-error row as well, which is the exact
// image of the affine plant and lets the noisy simulation match the
// recursion elementwise.
enum class NoiseCoupling { Decoupled, ExactAffine };

struct ErrorSequence {
    std::vector<IterationPoint> x;  // length k_max + 1, x[0] = x0
};

// Iterates X(k) = A X(k-1) + v(k-1) by direct multiplication (the oracle —
// no closed form). When draws are supplied they must cover indices
// 0..k_max and respect the bounds recorded in the iteration
// (NoiseBoundViolation otherwise).
ErrorSequence iterate_recursion(const AugmentedIteration& it, const IterationPoint& x0, int k_max,
                                const BoundedDraws* draws = nullptr,
                                NoiseCoupling coupling = NoiseCoupling::Decoupled);

struct Certificate {
    bool gains_valid = false;
    std::vector<std::string> gain_violations;
    bool m1_symmetric = false;
    bool m1_negative_definite = false;
    bool assembled = false;       // A could be built
    double rho = 0.0;             // spectral radius of A
    bool rho_pass = false;        // rho < 1
    double asymptotic_bound = 0.0;     // 2 sqrt(B_pr^2 + B_dr^2)
    double spectral_norm = 0.0;   // ||A||_2
    // Geometric-sum band valid in the Euclidean norm:
    //   asymptotic_bound / (1 - ||A||_2)              when ||A||_2 < 1,
    //   cond * asymptotic_bound / (1 - ||A||_P)       otherwise, with the norm
    // induced by the Lyapunov solution P = A^T P A + I (exists iff rho < 1).
    double conservative_bound = 0.0;
    std::string conservative_norm;  // "spectral" | "lyapunov" | "none"
    bool pass = false;              // gains valid, M1 negative definite, rho < 1
};

Certificate certify(const Mat3& m1, const TilcGains& gains, double probe_bound,
                    double drogue_bound);

}  // namespace aartilc

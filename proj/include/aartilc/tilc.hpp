// Terminal iterative learning controller: per-attempt reference computation
// and the two between-attempt update laws.
//
// The controller learns only from terminal data. Per attempt it aims the
// probe at one fixed predicted position
//     u_hat = p_dr_e0 + u_de_dr + u_e_pr,
// where p_dr_e0 is the observed drogue equilibrium, u_de_dr a low-pass
// estimate of the drogue terminal offset and u_e_pr a compensation for the
// probe's own terminal tracking error. After each attempt:
//     u_de_dr' = K_alpha * u_de_dr + (I - K_alpha) * (p_dr_T - p_dr_e0)
//     u_e_pr'  = u_e_pr + K_p * (p_dr_e0 + u_de_dr - p_pr_T)
// with the probe-error term evaluated against the offset estimate that was
// in effect during the recorded attempt. This bookkeeping makes the learned
// state follow the augmented linear recursion of the convergence module
// exactly, which the tests assert elementwise.
#pragma once

#include <string>
#include <vector>

#include "aartilc/vec3.hpp"

namespace aartilc {

// Diagonal learning gains. Convergence requires 0 <= k_alpha_i < 1 and
// 0 < k_p_i <= 1 per axis.
struct TilcGains {
    Vec3 k_alpha{0.2, 0.2, 0.2};
    Vec3 k_p{0.8, 0.8, 0.8};
};

// Empty when the gains satisfy the convergence constraints; otherwise one
// message per violated scalar constraint.
std::vector<std::string> validate_gains(const TilcGains& gains);

struct TilcState {
    Vec3 u_de_dr;       // drogue-offset estimate [m]
    Vec3 u_e_pr;        // probe tracking compensation [m]
    int iteration = 0;  // number of recorded attempts
};

// Terminal observations of one docking attempt.
struct AttemptRecord {
    Vec3 p_dr_e0;       // observed drogue equilibrium [m]
    Vec3 p_dr_terminal; // p_dr(T) [m]
    Vec3 p_pr_terminal; // p_pr(T) [m]
    double terminal_time = 0.0;  // [s]
};

// Fixed aim point for the whole attempt.
inline Vec3 compute_reference(const Vec3& p_dr_e0, const TilcState& s) {
    return p_dr_e0 + s.u_de_dr + s.u_e_pr;
}

// Low-pass update of the drogue-offset estimate from the observed terminal
// offset p_dr_T - p_dr_e0. Requires valid gains.
Vec3 update_offset_estimate(const TilcState& s, const AttemptRecord& rec, const TilcGains& g);

// Probe-compensation update from the terminal tracking error
// e_pr = p_dr_e0 + u_de_dr - p_pr_T, evaluated with the attempt's own
// u_de_dr (the state passed in, before the offset update is stored).
Vec3 update_probe_compensation(const TilcState& s, const AttemptRecord& rec, const TilcGains& g);

// Applies the offset update, then the probe-compensation update, and
// increments the iteration count. Deterministic.
TilcState record_attempt(const TilcState& s, const AttemptRecord& rec, const TilcGains& g);

}  // namespace aartilc

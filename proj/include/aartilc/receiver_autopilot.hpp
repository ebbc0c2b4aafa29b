// Linearized receiver translational dynamics and the PI trajectory-tracking
// autopilot with integral saturation.
//
// The receiver is an LTI model in offset coordinates around a trim point:
//     dx' = A dx + B du + G F_r,     dp_pr = C dx
// and the autopilot is the state-feedback PI law
//     du = -K_P dx - K_I sat(e_I),   e_I' = p_pr - u_hat  (clamped per axis).
// The reference only enters through the integrator; the clamp doubles as the
// closure-speed governor during the approach.
#pragma once

#include <Eigen/Dense>

#include "aartilc/errors.hpp"
#include "aartilc/vec3.hpp"

namespace aartilc {

struct ReceiverLinearModel {
    Eigen::MatrixXd a;  // n x n
    Eigen::MatrixXd b;  // n x m
    Eigen::MatrixXd g;  // n x 3, force input map
    Eigen::MatrixXd c;  // 3 x n, probe-position output map
    Eigen::VectorXd x0; // equilibrium state (offset coordinates are relative to it)
    Eigen::VectorXd u0; // trim input
    Vec3 p_pr0;         // probe position at the trim point [m]

    int n() const { return static_cast<int>(a.rows()); }
    int m() const { return static_cast<int>(b.cols()); }
    void validate() const;  // shape and finiteness checks; throws ConfigError
};

struct AutopilotGains {
    Eigen::MatrixXd k_p;        // m x n state feedback
    Eigen::MatrixXd k_i;        // m x 3 integral gain
    Vec3 integrator_clamp;      // per-axis clamp on e_I [m*s]
    double closure_speed = 0.8; // commanded approach speed [m/s], within [0.5, 1]

    void validate(const ReceiverLinearModel& model) const;
};

// One fixed-step classical Runge-Kutta step of the linear model with the
// inputs held constant over the step. Throws NumericalDivergence on blow-up.
Eigen::VectorXd receiver_step(const Eigen::VectorXd& dx, const Eigen::VectorXd& du, const Vec3& f_r,
                              double dt, const ReceiverLinearModel& model);

// du = -K_P dx - K_I sat(e_I), with the saturation applied per axis.
Eigen::VectorXd autopilot_control(const Eigen::VectorXd& dx, const Vec3& e_i,
                                  const AutopilotGains& gains);

// Clamped integrator update e_I' = clamp(e_I + (p_pr - u_hat) dt).
Vec3 integrator_update(const Vec3& e_i, const Vec3& p_pr, const Vec3& u_hat, double dt,
                       const AutopilotGains& gains);

struct StabilityReport {
    bool stable = false;
    double spectral_abscissa = 0.0;  // max real part of the closed-loop eigenvalues
};

// Eigenvalues of the augmented closed loop (state + unsaturated integrator);
// passes iff every real part is strictly negative.
StabilityReport stability_check(const ReceiverLinearModel& model, const AutopilotGains& gains);

// v_pr = u_hat(T) - p_pr(T).
inline Vec3 terminal_tracking_error(const Vec3& u_hat_terminal, const Vec3& p_pr_terminal) {
    return u_hat_terminal - p_pr_terminal;
}

// Same, but asserts the scenario-declared bound; throws BoundViolation when
// ||v_pr|| exceeds it (a declared_bound of zero disables the check).
Vec3 terminal_tracking_error(const Vec3& u_hat_terminal, const Vec3& p_pr_terminal,
                             double declared_bound);

// Shipped default model: per-axis double integrator with a first-order
// velocity lag, state layout [p_x, v_x, p_y, v_y, p_z, v_z].
//     p' = v,   v' = (control_gain * u - v) / tau + force_to_accel * F
ReceiverLinearModel default_receiver_model(double tau = 0.35, double control_gain = 1.0,
                                           double force_to_accel = 1.25e-4);

// Default gains for the default model: stiff, well-damped lateral loops and
// a soft axial loop so the clamped-integrator cruise holds the closure speed
// within a few percent over the whole approach. The axial clamp is derived
// from the closure speed (steady cruise speed equals it at the expected
// mid-approach distance-to-reference).
AutopilotGains default_autopilot_gains(double closure_speed = 0.8,
                                       double expected_mid_distance = 4.0,
                                       double lateral_speed_limit = 1.5, double tau = 0.35,
                                       double control_gain = 1.0);

}  // namespace aartilc

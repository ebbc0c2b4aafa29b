#include "aartilc/receiver_autopilot.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aartilc {

void ReceiverLinearModel::validate() const {
    if (a.rows() != a.cols() || a.rows() < 1) throw ConfigError("receiver.A must be square");
    if (b.rows() != a.rows()) throw ConfigError("receiver.B row count must match A");
    if (b.cols() < 1) throw ConfigError("receiver.B must have at least one input column");
    if (g.rows() != a.rows() || g.cols() != 3) throw ConfigError("receiver.G must be n x 3");
    if (c.rows() != 3 || c.cols() != a.rows()) throw ConfigError("receiver.C must be 3 x n");
    if (x0.size() != a.rows()) throw ConfigError("receiver.x0 length must match A");
    if (u0.size() != b.cols()) throw ConfigError("receiver.u0 length must match B columns");
    if (!a.allFinite() || !b.allFinite() || !g.allFinite() || !c.allFinite() || !x0.allFinite() ||
        !u0.allFinite() || !is_finite(p_pr0))
        throw ConfigError("receiver model entries must be finite");
}

void AutopilotGains::validate(const ReceiverLinearModel& model) const {
    if (k_p.rows() != model.m() || k_p.cols() != model.n())
        throw ConfigError("autopilot.K_P must be m x n");
    if (k_i.rows() != model.m() || k_i.cols() != 3) throw ConfigError("autopilot.K_I must be m x 3");
    if (!k_p.allFinite() || !k_i.allFinite()) throw ConfigError("autopilot gains must be finite");
    if (!(integrator_clamp.x > 0.0 && integrator_clamp.y > 0.0 && integrator_clamp.z > 0.0))
        throw ConfigError("autopilot.integrator_clamp must be positive per axis");
    if (!(closure_speed >= 0.5 && closure_speed <= 1.0))
        throw ConfigError("autopilot.closure_speed must lie in [0.5, 1.0]");
}

Eigen::VectorXd receiver_step(const Eigen::VectorXd& dx, const Eigen::VectorXd& du, const Vec3& f_r,
                              double dt, const ReceiverLinearModel& model) {
    if (!(dt > 0.0)) throw std::invalid_argument("receiver_step: dt must be > 0");
    const Eigen::Vector3d f(f_r.x, f_r.y, f_r.z);
    const Eigen::VectorXd forcing = model.b * du + model.g * f;
    const auto deriv = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        return model.a * x + forcing;
    };
    const Eigen::VectorXd k1 = deriv(dx);
    const Eigen::VectorXd k2 = deriv(dx + 0.5 * dt * k1);
    const Eigen::VectorXd k3 = deriv(dx + 0.5 * dt * k2);
    const Eigen::VectorXd k4 = deriv(dx + dt * k3);
    Eigen::VectorXd next = dx + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!next.allFinite() || next.lpNorm<Eigen::Infinity>() > 1e6)
        throw NumericalDivergence("receiver_step: state magnitude exceeded 1e6");
    return next;
}

namespace {

Vec3 clamp_per_axis(const Vec3& v, const Vec3& limit) {
    return {std::clamp(v.x, -limit.x, limit.x), std::clamp(v.y, -limit.y, limit.y),
            std::clamp(v.z, -limit.z, limit.z)};
}

}  // namespace

Eigen::VectorXd autopilot_control(const Eigen::VectorXd& dx, const Vec3& e_i,
                                  const AutopilotGains& gains) {
    const Vec3 sat = clamp_per_axis(e_i, gains.integrator_clamp);
    const Eigen::Vector3d e(sat.x, sat.y, sat.z);
    return -gains.k_p * dx - gains.k_i * e;
}

Vec3 integrator_update(const Vec3& e_i, const Vec3& p_pr, const Vec3& u_hat, double dt,
                       const AutopilotGains& gains) {
    if (!(dt > 0.0)) throw std::invalid_argument("integrator_update: dt must be > 0");
    return clamp_per_axis(e_i + dt * (p_pr - u_hat), gains.integrator_clamp);
}

StabilityReport stability_check(const ReceiverLinearModel& model, const AutopilotGains& gains) {
    // Augmented loop in the unsaturated region:
    //   [dx'; e'] = [[A - B K_P, -B K_I]; [C, 0]] [dx; e]
    const int n = model.n();
    Eigen::MatrixXd closed(n + 3, n + 3);
    closed.setZero();
    closed.topLeftCorner(n, n) = model.a - model.b * gains.k_p;
    closed.topRightCorner(n, 3) = -model.b * gains.k_i;
    closed.bottomLeftCorner(3, n) = model.c;

    const Eigen::EigenSolver<Eigen::MatrixXd> es(closed, false);
    StabilityReport report;
    report.spectral_abscissa = es.eigenvalues().real().maxCoeff();
    report.stable = report.spectral_abscissa < 0.0;
    return report;
}

Vec3 terminal_tracking_error(const Vec3& u_hat_terminal, const Vec3& p_pr_terminal,
                             double declared_bound) {
    const Vec3 v_pr = u_hat_terminal - p_pr_terminal;
    if (declared_bound > 0.0 && norm(v_pr) > declared_bound)
        throw BoundViolation("terminal tracking error exceeds the declared probe bound");
    return v_pr;
}

ReceiverLinearModel default_receiver_model(double tau, double control_gain, double force_to_accel) {
    ReceiverLinearModel m;
    m.a = Eigen::MatrixXd::Zero(6, 6);
    m.b = Eigen::MatrixXd::Zero(6, 3);
    m.g = Eigen::MatrixXd::Zero(6, 3);
    m.c = Eigen::MatrixXd::Zero(3, 6);
    for (int axis = 0; axis < 3; ++axis) {
        const int p = 2 * axis, v = 2 * axis + 1;
        m.a(p, v) = 1.0;
        m.a(v, v) = -1.0 / tau;
        m.b(v, axis) = control_gain / tau;
        m.g(v, axis) = force_to_accel;
        m.c(axis, p) = 1.0;
    }
    m.x0 = Eigen::VectorXd::Zero(6);
    m.u0 = Eigen::VectorXd::Zero(3);
    return m;
}

AutopilotGains default_autopilot_gains(double closure_speed, double expected_mid_distance,
                                       double lateral_speed_limit, double tau,
                                       double control_gain) {
    // Lateral axes: poles placed for a ~0.7-damped 0.65 rad/s loop.
    // Axial axis: soft position feedback so the clamped-integrator cruise
    // droops only a few percent over the approach.
    const double kpp_lat = 1.42, kpv_lat = 0.8, ki_lat = 0.65;
    const double kpp_x = 0.03, kpv_x = 0.8, ki_x = 0.06;
    (void)tau;

    AutopilotGains g;
    g.k_p = Eigen::MatrixXd::Zero(3, 6);
    g.k_i = Eigen::MatrixXd::Zero(3, 3);
    g.k_p(0, 0) = kpp_x;
    g.k_p(0, 1) = kpv_x;
    g.k_p(1, 2) = kpp_lat;
    g.k_p(1, 3) = kpv_lat;
    g.k_p(2, 4) = kpp_lat;
    g.k_p(2, 5) = kpv_lat;
    g.k_i(0, 0) = ki_x;
    g.k_i(1, 1) = ki_lat;
    g.k_i(2, 2) = ki_lat;
    g.closure_speed = closure_speed;

    // Quasi-steady cruise speed with the integrator pinned at c and the
    // reference d metres ahead: V = b (ki c + kpp d) / (1 + b kpv).
    // Solve for c so V equals the commanded speed at the mid-approach point.
    const double b = control_gain;
    g.integrator_clamp.x =
        (closure_speed * (1.0 + b * kpv_x) / b - kpp_x * expected_mid_distance) / ki_x;
    const double c_lat = lateral_speed_limit * (1.0 + b * kpv_lat) / (b * ki_lat);
    g.integrator_clamp.y = c_lat;
    g.integrator_clamp.z = c_lat;
    return g;
}

}  // namespace aartilc

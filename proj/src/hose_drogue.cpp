#include "aartilc/hose_drogue.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace aartilc {

namespace {

// Link direction and its angle derivatives for pitch t (toward -x) and yaw p
// (toward +y). Straight down is (0, 0, 1).
struct LinkFrame {
    Vec3 d;        // direction
    Vec3 d_pitch;  // dd/dpitch
    Vec3 d_yaw;    // dd/dyaw
    Vec3 curv;     // second-derivative terms contracted with the rates
};

LinkFrame link_frame(double pitch, double yaw, double pitch_rate, double yaw_rate) {
    const double st = std::sin(pitch), ct = std::cos(pitch);
    const double sp = std::sin(yaw), cp = std::cos(yaw);
    LinkFrame f;
    f.d = {-st * cp, sp, ct * cp};
    f.d_pitch = {-ct * cp, 0.0, -st * cp};
    f.d_yaw = {st * sp, cp, -ct * sp};
    const Vec3 dtt{st * cp, 0.0, -ct * cp};
    const Vec3 dtp{ct * sp, 0.0, st * sp};
    const Vec3 dpp{st * cp, -sp, -ct * cp};
    f.curv = pitch_rate * pitch_rate * dtt + 2.0 * pitch_rate * yaw_rate * dtp +
             yaw_rate * yaw_rate * dpp;
    return f;
}

Vec3 perpendicular_drag(const Vec3& rel_wind, const Vec3& axis, double half_rho_cd_area) {
    const Vec3 perp = rel_wind - dot(rel_wind, axis) * axis;
    return half_rho_cd_area * norm(perp) * perp;
}

Vec3 bluff_drag(const Vec3& rel_wind, double half_rho_cd_area) {
    return half_rho_cd_area * norm(rel_wind) * rel_wind;
}

}  // namespace

void HoseParams::validate() const {
    if (n_links < 1) throw ConfigError("hose.n_links must be >= 1");
    if (!(link_length > 0.0)) throw ConfigError("hose.link_length must be > 0");
    if (!(link_mass > 0.0)) throw ConfigError("hose.link_mass must be > 0");
    if (!(drogue_mass >= 0.0)) throw ConfigError("hose.drogue_mass must be >= 0");
    if (!(link_drag_coeff >= 0.0)) throw ConfigError("hose.link_drag_coeff must be >= 0");
    if (!(link_diameter >= 0.0)) throw ConfigError("hose.link_diameter must be >= 0");
    if (!(drogue_drag_area >= 0.0)) throw ConfigError("hose.drogue_drag_area must be >= 0");
    if (!(air_density > 0.0)) throw ConfigError("hose.air_density must be > 0");
    if (!(freestream >= 0.0)) throw ConfigError("hose.freestream must be >= 0");
    if (!(gravity > 0.0)) throw ConfigError("hose.gravity must be > 0");
    if (!(joint_damping >= 0.0)) throw ConfigError("hose.joint_damping must be >= 0");
}

Vec3 drogue_position(const HoseState& state, const HoseParams& params) {
    Vec3 p;
    for (int i = 0; i < state.n_links(); ++i) {
        const double st = std::sin(state.pitch(i)), ct = std::cos(state.pitch(i));
        const double sp = std::sin(state.yaw(i)), cp = std::cos(state.yaw(i));
        p += params.link_length * Vec3{-st * cp, sp, ct * cp};
    }
    return p;
}

struct HoseSimulator::Workspace {
    std::vector<LinkFrame> frames;
    std::vector<Vec3> node_velocity;
    std::vector<Vec3> node_force;     // gravity + drag (+ tip force on last node)
    std::vector<Vec3> force_suffix;   // G_a = sum_{i >= a} F_i
    std::vector<Vec3> curv_prefix;    // P_a = sum_{j <= a} curv_j
    std::vector<Vec3> curv_suffix;    // W_a = sum_{j > a} S_j curv_j
    std::vector<double> mass_suffix;  // S_a = sum_{i >= a} m_i
    Eigen::MatrixXd mass;
    Eigen::VectorXd rhs;
    Eigen::LLT<Eigen::MatrixXd> llt;
    std::vector<double> qdd, k1, k2, k3, k4;
    HoseState scratch;
};

HoseSimulator::HoseSimulator(HoseParams params)
    : params_(std::move(params)), ws_(std::make_unique<Workspace>()) {
    const int n = params_.n_links;
    ws_->frames.resize(n);
    ws_->node_velocity.resize(n);
    ws_->node_force.resize(n);
    ws_->force_suffix.resize(n);
    ws_->curv_prefix.resize(n);
    ws_->curv_suffix.resize(n);
    ws_->mass_suffix.resize(n);
    double s = 0.0;
    for (int i = n - 1; i >= 0; --i) {
        s += params_.link_mass + (i == n - 1 ? params_.drogue_mass : 0.0);
        ws_->mass_suffix[i] = s;
    }
    ws_->mass.resize(2 * n, 2 * n);
    ws_->rhs.resize(2 * n);
}

HoseSimulator::~HoseSimulator() = default;
HoseSimulator::HoseSimulator(HoseSimulator&&) noexcept = default;
HoseSimulator& HoseSimulator::operator=(HoseSimulator&&) noexcept = default;

// Equations of motion by d'Alembert projection onto the angle coordinates.
// With node positions r_i = L * sum_{j<=i} d_j and suffix masses S_p, the
// mass matrix block between links a and j is L^2 S_max(a,j) J_a^T J_j and
// the curvature bias contracts the same way, leaving only per-link frames
// and prefix/suffix sums to assemble.
void HoseSimulator::derivatives(const HoseState& state, const Vec3& tip_force,
                                std::vector<double>& qdd) const {
    const int n = params_.n_links;
    const double length = params_.link_length;
    Workspace& w = *ws_;

    for (int i = 0; i < n; ++i)
        w.frames[i] = link_frame(state.q[2 * i], state.q[2 * i + 1], state.qd[2 * i],
                                 state.qd[2 * i + 1]);

    // Node velocities (prefix sums of the link direction rates).
    Vec3 v;
    for (int i = 0; i < n; ++i) {
        v += length * (state.qd[2 * i] * w.frames[i].d_pitch + state.qd[2 * i + 1] * w.frames[i].d_yaw);
        w.node_velocity[i] = v;
    }

    // External forces per node: gravity, crossflow drag on the link, and the
    // drogue terms on the last node.
    const Vec3 wind{-params_.freestream, 0.0, 0.0};
    const double link_drag_factor =
        0.5 * params_.air_density * params_.link_drag_coeff * params_.link_diameter * length;
    const double drogue_drag_factor = 0.5 * params_.air_density * params_.drogue_drag_area;
    for (int i = 0; i < n; ++i) {
        const Vec3 rel = wind - w.node_velocity[i];
        const double mass = params_.link_mass + (i == n - 1 ? params_.drogue_mass : 0.0);
        Vec3 f{0.0, 0.0, mass * params_.gravity};
        if (link_drag_factor > 0.0) f += perpendicular_drag(rel, w.frames[i].d, link_drag_factor);
        if (i == n - 1) {
            if (drogue_drag_factor > 0.0) f += bluff_drag(rel, drogue_drag_factor);
            f += tip_force;
        }
        w.node_force[i] = f;
    }

    // Suffix force sums and the curvature prefix/suffix sums.
    Vec3 acc;
    for (int i = n - 1; i >= 0; --i) {
        acc += w.node_force[i];
        w.force_suffix[i] = acc;
    }
    Vec3 pre;
    for (int i = 0; i < n; ++i) {
        pre += w.frames[i].curv;
        w.curv_prefix[i] = pre;
    }
    Vec3 suf;
    for (int i = n - 1; i >= 0; --i) {
        w.curv_suffix[i] = suf;  // sum over j > i of S_j curv_j
        suf += w.mass_suffix[i] * w.frames[i].curv;
    }

    const double l2 = length * length;
    for (int a = 0; a < n; ++a) {
        const Vec3 h_total = w.mass_suffix[a] * w.curv_prefix[a] + w.curv_suffix[a];
        const Vec3& jp = w.frames[a].d_pitch;
        const Vec3& jy = w.frames[a].d_yaw;
        w.rhs[2 * a] = length * dot(jp, w.force_suffix[a]) - l2 * dot(jp, h_total) -
                       params_.joint_damping * state.qd[2 * a];
        w.rhs[2 * a + 1] = length * dot(jy, w.force_suffix[a]) - l2 * dot(jy, h_total) -
                           params_.joint_damping * state.qd[2 * a + 1];

        for (int j = a; j < n; ++j) {
            const double s = l2 * w.mass_suffix[j];
            const Vec3& kp = w.frames[j].d_pitch;
            const Vec3& ky = w.frames[j].d_yaw;
            const double pp = s * dot(jp, kp);
            const double py = s * dot(jp, ky);
            const double yp = s * dot(jy, kp);
            const double yy = s * dot(jy, ky);
            w.mass(2 * a, 2 * j) = pp;
            w.mass(2 * a, 2 * j + 1) = py;
            w.mass(2 * a + 1, 2 * j) = yp;
            w.mass(2 * a + 1, 2 * j + 1) = yy;
            if (j != a) {
                w.mass(2 * j, 2 * a) = pp;
                w.mass(2 * j, 2 * a + 1) = yp;
                w.mass(2 * j + 1, 2 * a) = py;
                w.mass(2 * j + 1, 2 * a + 1) = yy;
            }
        }
    }

    w.llt.compute(w.mass);
    if (w.llt.info() != Eigen::Success)
        throw NumericalDivergence("hose dynamics: mass matrix not positive definite (gimbal configuration)");
    Eigen::VectorXd sol = w.llt.solve(w.rhs);
    qdd.resize(2 * n);
    for (int i = 0; i < 2 * n; ++i) qdd[i] = sol[i];
}

void HoseSimulator::step(HoseState& state, const Vec3& f_hd, const Vec3& f_bow, double dt) {
    if (!(dt > 0.0) || dt > 0.02)
        throw std::invalid_argument("hose step: dt must lie in (0, 0.02]");
    const int n = params_.n_links;
    if (state.n_links() != n) throw std::invalid_argument("hose step: state size mismatch");

    const Vec3 tip = f_hd + f_bow;
    Workspace& w = *ws_;
    const std::size_t m = state.q.size();
    w.scratch.q.resize(m);
    w.scratch.qd.resize(m);

    const auto eval = [&](const HoseState& s, std::vector<double>& k) { derivatives(s, tip, k); };

    eval(state, w.k1);
    for (std::size_t i = 0; i < m; ++i) {
        w.scratch.q[i] = state.q[i] + 0.5 * dt * state.qd[i];
        w.scratch.qd[i] = state.qd[i] + 0.5 * dt * w.k1[i];
    }
    eval(w.scratch, w.k2);
    // Midpoint state for k2 uses qd at the k1 midpoint; rebuild for k3.
    for (std::size_t i = 0; i < m; ++i) {
        w.scratch.q[i] = state.q[i] + 0.5 * dt * (state.qd[i] + 0.5 * dt * w.k1[i]);
        w.scratch.qd[i] = state.qd[i] + 0.5 * dt * w.k2[i];
    }
    eval(w.scratch, w.k3);
    for (std::size_t i = 0; i < m; ++i) {
        w.scratch.q[i] = state.q[i] + dt * (state.qd[i] + 0.5 * dt * w.k2[i]);
        w.scratch.qd[i] = state.qd[i] + dt * w.k3[i];
    }
    eval(w.scratch, w.k4);

    for (std::size_t i = 0; i < m; ++i) {
        const double qd1 = state.qd[i];
        const double qd2 = state.qd[i] + 0.5 * dt * w.k1[i];
        const double qd3 = state.qd[i] + 0.5 * dt * w.k2[i];
        const double qd4 = state.qd[i] + dt * w.k3[i];
        state.q[i] += dt / 6.0 * (qd1 + 2.0 * qd2 + 2.0 * qd3 + qd4);
        state.qd[i] += dt / 6.0 * (w.k1[i] + 2.0 * w.k2[i] + 2.0 * w.k3[i] + w.k4[i]);
        if (std::abs(state.q[i]) > 1e6 || std::abs(state.qd[i]) > 1e6)
            throw NumericalDivergence("hose dynamics: state magnitude exceeded 1e6");
    }
}

double HoseSimulator::energy(const HoseState& state) const {
    const int n = params_.n_links;
    Workspace& w = *ws_;
    for (int i = 0; i < n; ++i)
        w.frames[i] = link_frame(state.q[2 * i], state.q[2 * i + 1], state.qd[2 * i],
                                 state.qd[2 * i + 1]);

    double kinetic = 0.0;
    Vec3 v;
    double z = 0.0;
    double potential = 0.0;
    for (int i = 0; i < n; ++i) {
        v += params_.link_length *
             (state.qd[2 * i] * w.frames[i].d_pitch + state.qd[2 * i + 1] * w.frames[i].d_yaw);
        z += params_.link_length * w.frames[i].d.z;
        const double mass = params_.link_mass + (i == n - 1 ? params_.drogue_mass : 0.0);
        kinetic += 0.5 * mass * dot(v, v);
        // z is down; hanging straight down (z = (i+1) L) is the reference.
        potential += mass * params_.gravity * ((i + 1) * params_.link_length - z);
    }
    return kinetic + potential;
}

HoseState hose_dynamics_step(const HoseState& state, const Vec3& f_hd, const Vec3& f_bow,
                             double dt, const HoseParams& params) {
    HoseSimulator sim(params);
    HoseState next = state;
    sim.step(next, f_hd, f_bow, dt);
    return next;
}

double chain_energy(const HoseState& state, const HoseParams& params) {
    return HoseSimulator(params).energy(state);
}

std::pair<HoseState, Vec3> solve_equilibrium(const HoseParams& params, const Vec3& steady_f_hd) {
    if (!is_finite(steady_f_hd))
        throw std::invalid_argument("solve_equilibrium: steady force must be finite");
    const int n = params.n_links;
    const double length = params.link_length;
    const Vec3 wind{-params.freestream, 0.0, 0.0};
    const double link_drag_factor =
        0.5 * params.air_density * params.link_drag_coeff * params.link_diameter * length;
    const double drogue_drag_factor = 0.5 * params.air_density * params.drogue_drag_area;

    std::vector<Vec3> dirs(n, Vec3{0.0, 0.0, 1.0});
    std::vector<Vec3> forces(n);
    std::vector<Vec3> suffix(n);

    double residual = 0.0;
    for (int iter = 0; iter < 500; ++iter) {
        for (int i = 0; i < n; ++i) {
            const double mass = params.link_mass + (i == n - 1 ? params.drogue_mass : 0.0);
            Vec3 f{0.0, 0.0, mass * params.gravity};
            if (link_drag_factor > 0.0) f += perpendicular_drag(wind, dirs[i], link_drag_factor);
            if (i == n - 1) {
                if (drogue_drag_factor > 0.0) f += bluff_drag(wind, drogue_drag_factor);
                f += steady_f_hd;
            }
            forces[i] = f;
        }
        Vec3 acc;
        for (int i = n - 1; i >= 0; --i) {
            acc += forces[i];
            suffix[i] = acc;
        }

        residual = 0.0;
        for (int i = 0; i < n; ++i) {
            const Vec3& g = suffix[i];
            const double gn = norm(g);
            if (gn == 0.0)
                throw NoConvergence("solve_equilibrium: zero net force on a subchain, direction undefined");
            const Vec3 d = g / gn;
            const Vec3 torque{dirs[i].y * g.z - dirs[i].z * g.y, dirs[i].z * g.x - dirs[i].x * g.z,
                              dirs[i].x * g.y - dirs[i].y * g.x};
            residual = std::max(residual, length * norm(torque));
            dirs[i] = d;
        }
        if (residual < 1e-8) {
            HoseState state = HoseState::straight_down(n);
            Vec3 p;
            for (int i = 0; i < n; ++i) {
                // d = (-sin t cos p, sin p, cos t cos p)
                state.q[2 * i + 1] = std::asin(std::clamp(dirs[i].y, -1.0, 1.0));
                state.q[2 * i] = std::atan2(-dirs[i].x, dirs[i].z);
                p += length * dirs[i];
            }
            return {state, p};
        }
    }
    throw NoConvergence("solve_equilibrium: torque residual did not reach tolerance");
}

}  // namespace aartilc

// Lumped-mass link-chain hose with a drogue end mass: dynamics, output map,
// and static equilibrium solver.
//
// The hose is a chain of n rigid links pinned at the tanker joint (origin).
// Each link carries two angles, pitch-from-vertical (toward -x, trailing)
// and yaw (toward +y), with the link mass lumped at its outer node and the
// drogue mass added to the last node. Gravity and orientation-dependent
// aerodynamic drag act on every node; the hose-level disturbance force and
// the bow-wave force act at the drogue end.
#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "aartilc/errors.hpp"
#include "aartilc/vec3.hpp"

namespace aartilc {

struct HoseParams {
    int n_links = 20;
    double link_length = 1.0;       // [m]
    double link_mass = 1.5;         // [kg] per link
    double drogue_mass = 25.0;      // [kg] added at the free end
    double link_drag_coeff = 1.0;   // cylinder crossflow drag coefficient
    double link_diameter = 0.06;    // [m]
    double drogue_drag_area = 0.5;  // Cd*A of the drogue canopy [m^2]
    double air_density = 1.225;     // [kg/m^3]
    double freestream = 22.0;       // tanker airspeed, wind is -x [m/s]
    double gravity = 9.81;          // [m/s^2], +z is down
    double joint_damping = 12.0;    // [N*m*s/rad], settles the chain

    double total_length() const { return n_links * link_length; }
    void validate() const;  // throws ConfigError
};

// Generalized state: per-link (pitch, yaw) angles and rates, interleaved
// [pitch_0, yaw_0, pitch_1, yaw_1, ...]; dimension 4 * n_links in total.
struct HoseState {
    std::vector<double> q;   // angles [rad], size 2n
    std::vector<double> qd;  // angular rates [rad/s], size 2n

    static HoseState straight_down(int n_links) {
        HoseState s;
        s.q.assign(2 * static_cast<std::size_t>(n_links), 0.0);
        s.qd.assign(2 * static_cast<std::size_t>(n_links), 0.0);
        return s;
    }
    int n_links() const { return static_cast<int>(q.size() / 2); }
    double pitch(int i) const { return q[2 * static_cast<std::size_t>(i)]; }
    double yaw(int i) const { return q[2 * static_cast<std::size_t>(i) + 1]; }
};

// Drogue position: sum of link direction vectors scaled by the link length,
// rooted at the tanker joint.
Vec3 drogue_position(const HoseState& state, const HoseParams& params);

// Reusable stepping context (owns the factorization workspace; one per
// simulation run).
class HoseSimulator {
  public:
    explicit HoseSimulator(HoseParams params);
    ~HoseSimulator();
    HoseSimulator(HoseSimulator&&) noexcept;
    HoseSimulator& operator=(HoseSimulator&&) noexcept;

    const HoseParams& params() const { return params_; }

    // Advances one classical 4-stage Runge-Kutta step with the drogue-end
    // forces held constant over the step. dt must lie in (0, 0.02].
    // Throws NumericalDivergence if any state magnitude exceeds 1e6 or the
    // chain reaches a gimbal configuration.
    void step(HoseState& state, const Vec3& f_hd, const Vec3& f_bow, double dt);

    // Kinetic plus gravitational potential energy (drag and damping excluded);
    // potential is measured relative to the straight-down configuration.
    double energy(const HoseState& state) const;

  private:
    struct Workspace;
    void derivatives(const HoseState& state, const Vec3& tip_force, std::vector<double>& qdd) const;

    HoseParams params_;
    std::unique_ptr<Workspace> ws_;
};

// One-shot step (constructs a simulator internally; tests and small runs).
HoseState hose_dynamics_step(const HoseState& state, const Vec3& f_hd, const Vec3& f_bow,
                             double dt, const HoseParams& params);

double chain_energy(const HoseState& state, const HoseParams& params);

// Static equilibrium under gravity, freestream drag and a steady drogue-end
// force: solved link by link from the free end (each link aligns with the
// net force on the subchain it carries), iterating the orientation-dependent
// drag to a fixed point. Returns the state and the drogue equilibrium
// position. Throws NoConvergence if the per-joint torque residual does not
// reach 1e-8 N*m within the iteration cap.
std::pair<HoseState, Vec3> solve_equilibrium(const HoseParams& params, const Vec3& steady_f_hd);

}  // namespace aartilc

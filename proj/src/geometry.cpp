#include "aartilc/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace aartilc {

TerminalEvent detect_terminal_time(std::span<const DockingSample> traj) {
    if (traj.size() < 2) throw std::invalid_argument("detect_terminal_time: need at least two samples");

    const double dx0 = position_error(traj[0].p_dr, traj[0].p_pr).x;
    if (!(dx0 > 0.0)) throw std::invalid_argument("detect_terminal_time: first sample must have Dx > 0");

    double dx_prev = dx0;
    for (std::size_t i = 1; i < traj.size(); ++i) {
        if (traj[i].t < traj[i - 1].t)
            throw std::invalid_argument("detect_terminal_time: sample times must be non-decreasing");

        const double dx = position_error(traj[i].p_dr, traj[i].p_pr).x;
        if (dx > 0.0) {
            dx_prev = dx;
            continue;
        }
        if (dx == 0.0) return {traj[i].t, traj[i].p_dr, traj[i].p_pr};

        // First bracket dx_prev > 0 > dx: linear interpolation in t. The
        // interpolated Dx is zero by construction up to rounding.
        const DockingSample& a = traj[i - 1];
        const DockingSample& b = traj[i];
        const double alpha = dx_prev / (dx_prev - dx);
        TerminalEvent ev;
        ev.t = a.t + alpha * (b.t - a.t);
        ev.p_dr = a.p_dr + alpha * (b.p_dr - a.p_dr);
        ev.p_pr = a.p_pr + alpha * (b.p_pr - a.p_pr);
        return ev;
    }
    throw NoContact("detect_terminal_time: Dx never reached zero");
}

DockingOutcome docking_outcome(const TerminalEvent& terminal, double criterion_radius) {
    if (!(criterion_radius > 0.0)) throw std::invalid_argument("docking_outcome: criterion radius must be > 0");
    const Vec3 dp = position_error(terminal.p_dr, terminal.p_pr);
    if (std::abs(dp.x) > kContactTolerance)
        throw std::invalid_argument("docking_outcome: input is not a terminal event (|Dx| above contact tolerance)");

    DockingOutcome out;
    out.t = terminal.t;
    out.p_dr = terminal.p_dr;
    out.p_pr = terminal.p_pr;
    out.radial_error = radial_error(dp);
    out.success = out.radial_error < criterion_radius;
    return out;
}

}  // namespace aartilc

// Docking-error arithmetic, terminal-time detection and the success criterion.
#pragma once

#include <span>

#include "aartilc/errors.hpp"
#include "aartilc/vec3.hpp"

namespace aartilc {

// Probe reaches the drogue's central plane when Dx crosses zero; after the
// terminal interpolation the residual Dx must sit within this tolerance [m].
inline constexpr double kContactTolerance = 1e-9;

// One trajectory sample: simultaneous drogue and probe positions at time t.
struct DockingSample {
    double t = 0.0;  // [s]
    Vec3 p_dr;       // drogue position [m]
    Vec3 p_pr;       // probe position [m]
};

// Terminal state of one docking attempt: first instant with Dx = 0.
struct TerminalEvent {
    double t = 0.0;  // terminal time T [s]
    Vec3 p_dr;       // drogue terminal position [m]
    Vec3 p_pr;       // probe terminal position [m]
};

struct DockingOutcome {
    double t = 0.0;             // terminal time T [s]
    Vec3 p_dr;                  // drogue terminal position [m]
    Vec3 p_pr;                  // probe terminal position [m]
    double radial_error = 0.0;  // DR(T) [m]
    bool success = false;       // strict DR(T) < criterion radius
};

// Docking error between drogue and probe, componentwise p_dr - p_pr.
// The x component is signed: probe behind the drogue gives Dx > 0.
inline Vec3 position_error(const Vec3& p_dr, const Vec3& p_pr) { return p_dr - p_pr; }

// Radial error in the (y, z) plane; the axial component is ignored by
// definition (at the terminal time it is zero anyway).
inline double radial_error(const Vec3& dp) { return std::sqrt(dp.y * dp.y + dp.z * dp.z); }

// Finds the first time the axial error Dx crosses or reaches zero and returns
// the (linearly interpolated) terminal time and positions. Only the first
// crossing counts; jitter before it is ignored.
//
// Preconditions: at least two samples, Dx of the first sample > 0, times
// non-decreasing. Throws NoContact when Dx never reaches zero.
TerminalEvent detect_terminal_time(std::span<const DockingSample> traj);

// Success iff the terminal radial error is strictly below the criterion
// radius. Requires criterion_radius > 0 and a genuine terminal event
// (|Dx| within kContactTolerance).
DockingOutcome docking_outcome(const TerminalEvent& terminal, double criterion_radius);

}  // namespace aartilc

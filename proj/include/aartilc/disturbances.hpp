// Aerodynamic disturbance inputs: bow-wave force surrogate, affine terminal
// drogue-offset map, bounded random terms, gust and turbulence generators.
#pragma once

#include "aartilc/errors.hpp"
#include "aartilc/mat.hpp"
#include "aartilc/rng.hpp"
#include "aartilc/vec3.hpp"

namespace aartilc {

// Parametric stand-in for the receiver forebody flow field acting on the
// drogue. The force depends only on the drogue-minus-probe error dp: a
// smooth Gaussian envelope in the axial separation and the radial offset,
// with an axial (push-ahead) component and a radial component. The axial
// profile leads the probe tip by axial_lead (the forebody sits behind the
// probe), which keeps the axial force monotone decreasing in Dx through
// contact; a negative radial gain pulls the drogue toward the probe axis.
// Together these make the induced terminal-offset map negative definite.
struct BowWaveSurrogate {
    double amplitude = 50.0;    // A_b [N]
    double radial_scale = 1.6;  // sigma_r [m]
    double axial_scale = 1.3;   // sigma_x [m]
    double radial_gain = -1.0;  // c_r [-]
    double axial_gain = 1.0;    // c_x [-]
    double axial_lead = 1.0;    // probe-tip-to-forebody distance [m]

    void validate() const;  // throws ConfigError
};

// F_bow(dp) = A_b * exp(-r^2/(2 sigma_r^2))
//           * exp((lead^2 - (Dx + lead)^2)/(2 sigma_x^2))
//           * (c_x * x_hat + c_r * (r / sigma_r) * r_hat),
// r = radial offset of the drogue from the probe axis in (y, z); the radial
// component vanishes (smoothly) at r = 0 and the whole force is 1:1 with
// A_b * (c_x x_hat + c_r r_hat-scaled) at contact.
Vec3 bow_wave_force(const Vec3& dp, const BowWaveSurrogate& model);

// True iff all eigenvalues of m1 are strictly negative beyond numerical
// zero (relative threshold 1e-12 on the matrix scale). m1 must be symmetric
// within 1e-12 of its magnitude scale; throws NotSymmetric otherwise.
bool validate_negative_definite(const Mat3& m1);

// Affine terminal drogue-offset map: offset = m0 + M1 * dp_T (+ bounded noise).
struct DrogueOffsetMap {
    Vec3 m0;  // offset with the probe exactly at contact [m]
    Mat3 m1;  // Jacobian of the offset map at dp = 0

    // Validates m1 at construction: symmetric negative definite by default.
    // allow_asymmetric relaxes the symmetry requirement to "symmetric part
    // negative definite"; the convergence certificate is then the only
    // guarantee and must be checked numerically.
    static DrogueOffsetMap make(const Vec3& m0, const Mat3& m1, bool allow_asymmetric = false);
};

// Terminal drogue offset under the affine map with a bounded fluctuation
// v_dr. Throws NoiseBoundViolation when ||v_dr|| exceeds drogue_bound.
Vec3 terminal_offset(const Vec3& dp_terminal, const DrogueOffsetMap& map, const Vec3& v_dr,
                     double drogue_bound);

// Wind gust: 1-cosine ramp from onset to full amplitude over ramp_duration,
// held thereafter, zero before onset.
struct GustSpec {
    Vec3 amplitude;               // wind velocity per axis [m/s]; zero axis = masked off
    double onset_time = 0.0;      // [s]
    double ramp_duration = 2.0;   // [s]
};

Vec3 gust_velocity(double t, const GustSpec& spec);

// Gust expressed as an equivalent force through a linear drag map
// (drag_gain in N per m/s of wind).
inline Vec3 gust_force(double t, const GustSpec& spec, double drag_gain) {
    return drag_gain * gust_velocity(t, spec);
}

// Declared disturbance magnitudes for one scenario.
struct NoiseSpec {
    double drogue_bound = 0.0;           // B_dr [m], drogue terminal fluctuation
    double probe_bound = 0.0;            // B_pr [m], probe terminal tracking residual
    double turbulence_intensity = 0.0;   // RMS of the correlated noise process
    double turbulence_correlation = 0.8; // correlation time [s]
    double measurement_sigma = 0.0;      // terminal measurement noise, per axis [m]
    GustSpec gust;

    void validate() const;
};

// Exponentially correlated (first-order filtered) zero-mean noise, one
// independent channel per axis. Unit stationary RMS per axis before the
// intensity scaling; values are clipped at clip_sigma standard deviations so
// induced terminal fluctuations stay within the declared bounds. Identical
// seeds yield identical sequences.
class TurbulenceStream {
  public:
    TurbulenceStream(std::uint64_t seed, double correlation_time, double clip_sigma = 3.0)
        : rng_(seed), tau_(correlation_time), clip_(clip_sigma) {}

    Vec3 step(double dt, double intensity);

  private:
    double channel(double& state, double a, double b);

    Pcg32 rng_;
    double tau_;
    double clip_;
    Vec3 state_;  // unit-RMS filter states
};

}  // namespace aartilc

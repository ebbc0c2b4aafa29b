#include "aartilc/disturbances.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace aartilc {

void BowWaveSurrogate::validate() const {
    if (!(amplitude >= 0.0)) throw ConfigError("bow_wave.amplitude must be >= 0");
    if (!(radial_scale > 0.0)) throw ConfigError("bow_wave.radial_scale must be > 0");
    if (!(axial_scale > 0.0)) throw ConfigError("bow_wave.axial_scale must be > 0");
    if (!(axial_lead >= 0.0)) throw ConfigError("bow_wave.axial_lead must be >= 0");
    if (!std::isfinite(radial_gain) || !std::isfinite(axial_gain))
        throw ConfigError("bow_wave gains must be finite");
}

Vec3 bow_wave_force(const Vec3& dp, const BowWaveSurrogate& model) {
    const double r2 = dp.y * dp.y + dp.z * dp.z;
    const double sr2 = model.radial_scale * model.radial_scale;
    const double sx2 = model.axial_scale * model.axial_scale;
    // Axial profile shifted by the lead distance and normalized to 1 at
    // contact, so the force keeps growing as the forebody (which sits behind
    // the probe tip) closes on the drogue plane and falls off monotonically
    // with separation through Dx = 0.
    const double lead = dp.x + model.axial_lead;
    const double axial_profile =
        std::exp((model.axial_lead * model.axial_lead - lead * lead) / (2.0 * sx2));
    const double envelope = model.amplitude * std::exp(-r2 / (2.0 * sr2)) * axial_profile;
    Vec3 f{envelope * model.axial_gain, 0.0, 0.0};
    if (r2 > 0.0) {
        // Radial magnitude ~ (r / sigma_r) exp(-r^2 / 2 sigma_r^2): zero and
        // smooth at r = 0, peak pull at one radial scale.
        const double radial = envelope * model.radial_gain / model.radial_scale;
        f.y = radial * dp.y;
        f.z = radial * dp.z;
    }
    return f;
}

bool validate_negative_definite(const Mat3& m1) {
    const double scale = std::max(1.0, max_abs(m1));
    if (max_asymmetry(m1) > 1e-12 * scale)
        throw NotSymmetric("validate_negative_definite: matrix asymmetry exceeds tolerance");
    const auto ev = symmetric_eigenvalues(m1);
    // Strictly negative beyond numerical zero: an eigenvalue that sits at
    // rounding level relative to the matrix scale does not count.
    return ev[2] < -1e-12 * scale;
}

DrogueOffsetMap DrogueOffsetMap::make(const Vec3& m0, const Mat3& m1, bool allow_asymmetric) {
    if (!is_finite(m0)) throw ConfigError("offset map m0 must be finite");
    if (allow_asymmetric) {
        // Negative-definite-like: symmetric part strictly negative definite.
        const Mat3 sym = 0.5 * (m1 + transpose(m1));
        if (!(symmetric_eigenvalues(sym)[2] < 0.0))
            throw ConfigError("offset map M1: symmetric part is not negative definite");
    } else if (!validate_negative_definite(m1)) {
        throw ConfigError("offset map M1 is not negative definite");
    }
    return DrogueOffsetMap{m0, m1};
}

Vec3 terminal_offset(const Vec3& dp_terminal, const DrogueOffsetMap& map, const Vec3& v_dr,
                     double drogue_bound) {
    if (norm(v_dr) > drogue_bound)
        throw NoiseBoundViolation("terminal_offset: ||v_dr|| exceeds the declared drogue bound");
    return map.m0 + map.m1 * dp_terminal + v_dr;
}

Vec3 gust_velocity(double t, const GustSpec& spec) {
    const double dt = t - spec.onset_time;
    if (dt <= 0.0) return {};
    if (spec.ramp_duration <= 0.0 || dt >= spec.ramp_duration) return spec.amplitude;
    const double shape = 0.5 * (1.0 - std::cos(std::numbers::pi * dt / spec.ramp_duration));
    return shape * spec.amplitude;
}

void NoiseSpec::validate() const {
    if (!(drogue_bound >= 0.0)) throw ConfigError("disturbances.drogue_bound must be >= 0");
    if (!(probe_bound >= 0.0)) throw ConfigError("disturbances.probe_bound must be >= 0");
    if (!(turbulence_intensity >= 0.0)) throw ConfigError("disturbances.turbulence_intensity must be >= 0");
    if (!(turbulence_correlation > 0.0)) throw ConfigError("disturbances.turbulence_correlation must be > 0");
    if (!(measurement_sigma >= 0.0)) throw ConfigError("disturbances.measurement_sigma must be >= 0");
    if (!is_finite(gust.amplitude)) throw ConfigError("disturbances.gust.amplitude must be finite");
    if (!(gust.ramp_duration >= 0.0)) throw ConfigError("disturbances.gust.ramp_duration must be >= 0");
}

double TurbulenceStream::channel(double& state, double a, double b) {
    state = a * state + b * rng_.next_normal();
    return state;
}

Vec3 TurbulenceStream::step(double dt, double intensity) {
    // Discrete first-order filter with unit stationary variance; the clip
    // bounds each axis so terminal fluctuations respect the declared B values.
    const double a = std::exp(-dt / tau_);
    const double b = std::sqrt(std::max(0.0, 1.0 - a * a));
    Vec3 out{channel(state_.x, a, b), channel(state_.y, a, b), channel(state_.z, a, b)};
    if (intensity == 0.0) return {};
    const auto clip = [this](double v) { return std::clamp(v, -clip_, clip_); };
    return {intensity * clip(out.x), intensity * clip(out.y), intensity * clip(out.z)};
}

}  // namespace aartilc

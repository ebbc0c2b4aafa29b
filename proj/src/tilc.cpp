#include "aartilc/tilc.hpp"

#include <stdexcept>

namespace aartilc {

namespace {

void append_violation(std::vector<std::string>& out, const char* name, int axis, double value,
                      const char* constraint) {
    out.push_back(std::string(name) + "[" + std::to_string(axis) + "] = " + std::to_string(value) +
                  " violates " + constraint);
}

double axis(const Vec3& v, int i) { return i == 0 ? v.x : (i == 1 ? v.y : v.z); }

}  // namespace

std::vector<std::string> validate_gains(const TilcGains& gains) {
    std::vector<std::string> violations;
    for (int i = 0; i < 3; ++i) {
        const double ka = axis(gains.k_alpha, i);
        const double kp = axis(gains.k_p, i);
        if (!(ka >= 0.0 && ka < 1.0)) append_violation(violations, "k_alpha", i, ka, "0 <= k_alpha < 1");
        if (!(kp > 0.0 && kp <= 1.0)) append_violation(violations, "k_p", i, kp, "0 < k_p <= 1");
    }
    return violations;
}

Vec3 update_offset_estimate(const TilcState& s, const AttemptRecord& rec, const TilcGains& g) {
    if (!validate_gains(g).empty())
        throw std::invalid_argument("update_offset_estimate: invalid learning gains");
    const Vec3 observed_offset = rec.p_dr_terminal - rec.p_dr_e0;
    const Vec3& ka = g.k_alpha;
    return {ka.x * s.u_de_dr.x + (1.0 - ka.x) * observed_offset.x,
            ka.y * s.u_de_dr.y + (1.0 - ka.y) * observed_offset.y,
            ka.z * s.u_de_dr.z + (1.0 - ka.z) * observed_offset.z};
}

Vec3 update_probe_compensation(const TilcState& s, const AttemptRecord& rec, const TilcGains& g) {
    const Vec3 e_pr = rec.p_dr_e0 + s.u_de_dr - rec.p_pr_terminal;
    return {s.u_e_pr.x + g.k_p.x * e_pr.x,
            s.u_e_pr.y + g.k_p.y * e_pr.y,
            s.u_e_pr.z + g.k_p.z * e_pr.z};
}

TilcState record_attempt(const TilcState& s, const AttemptRecord& rec, const TilcGains& g) {
    TilcState next;
    next.u_de_dr = update_offset_estimate(s, rec, g);
    next.u_e_pr = update_probe_compensation(s, rec, g);
    next.iteration = s.iteration + 1;
    return next;
}

}  // namespace aartilc

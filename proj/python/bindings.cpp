// Python bindings for the docking-simulation core.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <stdexcept>

#include "aartilc/convergence.hpp"
#include "aartilc/tilc.hpp"
#include "aartilc/vec3.hpp"

namespace py = pybind11;
using namespace aartilc;

namespace {

Vec3 vec3_from(const std::array<double, 3>& a) { return {a[0], a[1], a[2]}; }
std::array<double, 3> vec3_to(const Vec3& v) { return {v.x, v.y, v.z}; }

Mat3 mat3_from(const std::array<std::array<double, 3>, 3>& rows) {
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = rows[i][j];
    return m;
}

py::dict certificate_to_dict(const Certificate& c) {
    py::dict d;
    d["gains_valid"] = c.gains_valid;
    d["gain_violations"] = c.gain_violations;
    d["m1_symmetric"] = c.m1_symmetric;
    d["m1_negative_definite"] = c.m1_negative_definite;
    d["spectral_radius"] = c.rho;
    d["spectral_radius_pass"] = c.rho_pass;
    d["asymptotic_bound"] = c.asymptotic_bound;
    d["spectral_norm"] = c.spectral_norm;
    d["conservative_bound"] = c.conservative_bound;
    d["conservative_norm"] = c.conservative_norm;
    d["pass"] = c.pass;
    return d;
}

}  // namespace

void bind_simulation(py::module_& m);

PYBIND11_MODULE(_core, m) {
    m.doc() = "Probe-drogue docking simulation with terminal iterative learning control";

    m.def("asymptotic_error_bound", &asymptotic_error_bound, py::arg("probe_bound"), py::arg("drogue_bound"),
          "Asymptotic error band 2*sqrt(Bpr^2 + Bdr^2).");

    m.def(
        "validate_gains",
        [](const std::array<double, 3>& k_alpha, const std::array<double, 3>& k_p) {
            return validate_gains(TilcGains{vec3_from(k_alpha), vec3_from(k_p)});
        },
        py::arg("k_alpha"), py::arg("k_p"),
        "Returns the list of violated gain constraints (empty when valid).");

    m.def(
        "certify",
        [](const std::array<std::array<double, 3>, 3>& m1, const std::array<double, 3>& k_alpha,
           const std::array<double, 3>& k_p, double probe_bound, double drogue_bound) {
            return certificate_to_dict(
                certify(mat3_from(m1), TilcGains{vec3_from(k_alpha), vec3_from(k_p)}, probe_bound,
                        drogue_bound));
        },
        py::arg("m1"), py::arg("k_alpha"), py::arg("k_p"), py::arg("probe_bound") = 0.0,
        py::arg("drogue_bound") = 0.0, "Convergence certificate for an offset map and gain set.");

    m.def(
        "iterate_recursion",
        [](const std::array<std::array<double, 3>, 3>& m1, const std::array<double, 3>& k_alpha,
           const std::array<double, 3>& k_p, const std::array<double, 3>& dp0,
           const std::array<double, 3>& epr0, int k_max) {
            const AugmentedIteration it =
                build_augmented(mat3_from(m1), TilcGains{vec3_from(k_alpha), vec3_from(k_p)});
            const ErrorSequence seq =
                iterate_recursion(it, IterationPoint{vec3_from(dp0), vec3_from(epr0)}, k_max);
            py::list out;
            for (const auto& p : seq.x) {
                py::dict row;
                row["docking_error"] = vec3_to(p.docking_error);
                row["probe_error"] = vec3_to(p.probe_error);
                out.append(row);
            }
            return out;
        },
        py::arg("m1"), py::arg("k_alpha"), py::arg("k_p"), py::arg("dp0"), py::arg("epr0"),
        py::arg("k_max"), "Noise-free augmented recursion, one dict per iteration.");

    bind_simulation(m);
}

#include "aartilc/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aartilc/rng.hpp"

namespace aartilc {

namespace {

Mat3 diag(const Vec3& v) { return Mat3::diagonal({v.x, v.y, v.z}); }

// Reduces m in place to upper Hessenberg form by Householder similarity
// transforms (eigenvalues preserved).
template <int N>
void hessenberg_reduce(Mat<N>& m) {
    for (int k = 0; k + 2 < N; ++k) {
        double scale = 0.0;
        for (int i = k + 1; i < N; ++i) scale += std::abs(m(i, k));
        if (scale == 0.0) continue;

        std::array<double, N> v{};
        double sigma = 0.0;
        for (int i = k + 1; i < N; ++i) {
            v[i] = m(i, k) / scale;
            sigma += v[i] * v[i];
        }
        double alpha = std::sqrt(sigma);
        if (v[k + 1] > 0.0) alpha = -alpha;
        v[k + 1] -= alpha;
        const double beta = -alpha * v[k + 1];  // = ||v||^2 / 2
        if (beta == 0.0) continue;

        // H = I - v v^T / beta; apply H from the left and the right.
        for (int j = k; j < N; ++j) {
            double s = 0.0;
            for (int i = k + 1; i < N; ++i) s += v[i] * m(i, j);
            s /= beta;
            for (int i = k + 1; i < N; ++i) m(i, j) -= s * v[i];
        }
        for (int i = 0; i < N; ++i) {
            double s = 0.0;
            for (int j = k + 1; j < N; ++j) s += m(i, j) * v[j];
            s /= beta;
            for (int j = k + 1; j < N; ++j) m(i, j) -= s * v[j];
        }
        for (int i = k + 2; i < N; ++i) m(i, k) = 0.0;
    }
}

// Eigenvalue moduli of an upper-Hessenberg matrix via the shifted QR
// iteration with deflation (hqr structure: Francis double shift with
// occasional exceptional shifts). Returns the largest modulus.
template <int N>
double hessenberg_qr_max_modulus(Mat<N>& a, int iter_cap) {
    const double anorm_scale = max_abs(a);
    double rho = 0.0;
    int nn = N - 1;
    double t = 0.0;
    int total_its = 0;
    while (nn >= 0) {
        int its = 0;
        int l;
        for (;;) {
            // Look for a negligible subdiagonal to split the matrix.
            for (l = nn; l >= 1; --l) {
                const double s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
                const double cmp = (s == 0.0) ? anorm_scale : s;
                if (std::abs(a(l, l - 1)) <= 1e-16 * cmp) {
                    a(l, l - 1) = 0.0;
                    break;
                }
            }
            double x = a(nn, nn);
            if (l == nn) {  // one real eigenvalue
                rho = std::max(rho, std::abs(x + t));
                --nn;
                break;
            }
            double y = a(nn - 1, nn - 1);
            double w = a(nn, nn - 1) * a(nn - 1, nn);
            if (l == nn - 1) {  // a 2x2 block: real pair or complex pair
                double p = 0.5 * (y - x);
                double q = p * p + w;
                double z = std::sqrt(std::abs(q));
                x += t;
                if (q >= 0.0) {
                    z = p + (p >= 0.0 ? z : -z);
                    rho = std::max(rho, std::abs(x + z));
                    if (z != 0.0) rho = std::max(rho, std::abs(x - w / z));
                } else {
                    rho = std::max(rho, std::hypot(x + p, z));
                }
                nn -= 2;
                break;
            }
            if (its == 30 || total_its > iter_cap)
                throw NoConvergence("spectral_radius: QR iteration cap reached");
            if (its == 10 || its == 20) {
                // Exceptional shift.
                t += x;
                for (int i = 0; i <= nn; ++i) a(i, i) -= x;
                const double s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
                x = y = 0.75 * s;
                w = -0.4375 * s * s;
            }
            ++its;
            ++total_its;

            // Form the first column of (H - s1)(H - s2) and chase the bulge.
            int m;
            double p = 0, q = 0, r = 0;
            for (m = nn - 2; m >= l; --m) {
                const double z = a(m, m);
                const double rr = x - z;
                const double ss = y - z;
                p = (rr * ss - w) / a(m + 1, m) + a(m, m + 1);
                q = a(m + 1, m + 1) - z - rr - ss;
                r = a(m + 2, m + 1);
                const double scale = std::abs(p) + std::abs(q) + std::abs(r);
                if (scale != 0.0) {
                    p /= scale;
                    q /= scale;
                    r /= scale;
                }
                if (m == l) break;
                const double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
                const double v = std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) +
                                                std::abs(a(m + 1, m + 1)));
                if (u <= 1e-16 * v) break;
            }
            for (int i = m + 2; i <= nn; ++i) {
                a(i, i - 2) = 0.0;
                if (i != m + 2) a(i, i - 3) = 0.0;
            }
            for (int k = m; k <= nn - 1; ++k) {
                if (k != m) {
                    p = a(k, k - 1);
                    q = a(k + 1, k - 1);
                    r = (k != nn - 1) ? a(k + 2, k - 1) : 0.0;
                    x = std::abs(p) + std::abs(q) + std::abs(r);
                    if (x == 0.0) continue;
                    p /= x;
                    q /= x;
                    r /= x;
                }
                double s = std::sqrt(p * p + q * q + r * r);
                if (p < 0.0) s = -s;
                if (s == 0.0) continue;
                if (k == m) {
                    if (l != m) a(k, k - 1) = -a(k, k - 1);
                } else {
                    a(k, k - 1) = -s * x;
                }
                p += s;
                x = p / s;
                y = q / s;
                double z = r / s;
                q /= p;
                r /= p;
                for (int j = k; j <= nn; ++j) {  // row modification
                    double pp = a(k, j) + q * a(k + 1, j);
                    if (k != nn - 1) {
                        pp += r * a(k + 2, j);
                        a(k + 2, j) -= pp * z;
                    }
                    a(k + 1, j) -= pp * y;
                    a(k, j) -= pp * x;
                }
                const int mmin = (nn < k + 3) ? nn : k + 3;
                for (int i = l; i <= mmin; ++i) {  // column modification
                    double pp = x * a(i, k) + y * a(i, k + 1);
                    if (k != nn - 1) {
                        pp += z * a(i, k + 2);
                        a(i, k + 2) -= pp * r;
                    }
                    a(i, k + 1) -= pp * q;
                    a(i, k) -= pp;
                }
            }
        }
    }
    return rho;
}

}  // namespace

AugmentedIteration build_augmented(const Mat3& m1, const TilcGains& gains) {
    const auto violations = validate_gains(gains);
    if (!violations.empty())
        throw std::invalid_argument("build_augmented: invalid learning gains: " + violations.front());

    const Mat3 identity = Mat3::identity();
    const Mat3 k_alpha = diag(gains.k_alpha);
    const Mat3 k_p = diag(gains.k_p);

    AugmentedIteration it;
    it.m1_minus_i_inv = inverse(m1 - identity);
    it.a1 = it.m1_minus_i_inv * (m1 - k_alpha);
    it.a2 = it.m1_minus_i_inv * (k_p + k_alpha - identity);
    it.a3 = identity - k_p;

    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            it.a(i, j) = it.a1(i, j);
            it.a(i, j + 3) = it.a2(i, j);
            it.a(i + 3, j + 3) = it.a3(i, j);
        }
    it.rho = spectral_radius(it.a);
    return it;
}

template <int N>
double spectral_radius(const Mat<N>& a, int max_iter) {
    for (double v : a.a)
        if (!std::isfinite(v)) throw std::invalid_argument("spectral_radius: non-finite matrix entry");
    if (max_abs(a) == 0.0) return 0.0;

    Mat<N> h = a;
    hessenberg_reduce(h);
    return hessenberg_qr_max_modulus(h, max_iter);
}

template double spectral_radius(const Mat<2>&, int);
template double spectral_radius(const Mat<3>&, int);
template double spectral_radius(const Mat<6>&, int);

double asymptotic_error_bound(double probe_bound, double drogue_bound) {
    if (!(probe_bound >= 0.0) || !(drogue_bound >= 0.0))
        throw std::invalid_argument("asymptotic_error_bound: bounds must be >= 0");
    return 2.0 * std::hypot(probe_bound, drogue_bound);
}

BoundedDraws sample_bounded_draws(std::uint64_t seed, int count, double drogue_bound,
                                  double probe_bound, bool adversarial) {
    Pcg32 rng(seed);
    const auto draw = [&](double bound) -> Vec3 {
        Vec3 dir{rng.next_normal(), rng.next_normal(), rng.next_normal()};
        const double n = norm(dir);
        const double u = rng.next_double();
        if (bound == 0.0 || n == 0.0) return {};
        const double radius = adversarial ? bound : bound * std::cbrt(u);
        return (radius / n) * dir;
    };
    BoundedDraws d;
    d.v_dr.reserve(count);
    d.v_pr.reserve(count);
    for (int k = 0; k < count; ++k) {
        d.v_dr.push_back(draw(drogue_bound));
        d.v_pr.push_back(draw(probe_bound));
    }
    return d;
}

ErrorSequence iterate_recursion(const AugmentedIteration& it, const IterationPoint& x0, int k_max,
                                const BoundedDraws* draws, NoiseCoupling coupling) {
    if (k_max < 0) throw std::invalid_argument("iterate_recursion: k_max must be >= 0");
    if (draws) {
        if (static_cast<int>(draws->v_dr.size()) < k_max + 1 ||
            static_cast<int>(draws->v_pr.size()) < k_max + 1)
            throw std::invalid_argument("iterate_recursion: need draws for indices 0..k_max");
        for (int k = 0; k <= k_max; ++k) {
            if (norm(draws->v_dr[k]) > it.drogue_bound + 1e-12)
                throw NoiseBoundViolation("iterate_recursion: drogue draw exceeds declared bound");
            if (norm(draws->v_pr[k]) > it.probe_bound + 1e-12)
                throw NoiseBoundViolation("iterate_recursion: probe draw exceeds declared bound");
        }
    }

    ErrorSequence seq;
    seq.x.reserve(k_max + 1);
    seq.x.push_back(x0);
    std::array<double, 6> x{x0.docking_error.x, x0.docking_error.y, x0.docking_error.z,
                            x0.probe_error.x, x0.probe_error.y, x0.probe_error.z};
    for (int k = 1; k <= k_max; ++k) {
        x = it.a * x;
        if (draws) {
            // v(k-1) built from the raw draws at indices k-1 and k.
            Vec3 dr_diff = draws->v_dr[k - 1] - draws->v_dr[k];
            if (coupling == NoiseCoupling::ExactAffine)
                dr_diff += draws->v_pr[k - 1] - draws->v_pr[k];
            const Vec3 top = it.m1_minus_i_inv * dr_diff;
            const Vec3 bottom = draws->v_pr[k] - draws->v_pr[k - 1];
            x[0] += top.x;
            x[1] += top.y;
            x[2] += top.z;
            x[3] += bottom.x;
            x[4] += bottom.y;
            x[5] += bottom.z;
        }
        seq.x.push_back({{x[0], x[1], x[2]}, {x[3], x[4], x[5]}});
    }
    return seq;
}

Certificate certify(const Mat3& m1, const TilcGains& gains, double probe_bound,
                    double drogue_bound) {
    Certificate cert;
    cert.gain_violations = validate_gains(gains);
    cert.gains_valid = cert.gain_violations.empty();
    cert.asymptotic_bound = asymptotic_error_bound(probe_bound, drogue_bound);

    cert.m1_symmetric = max_asymmetry(m1) <= 1e-12 * std::max(1.0, max_abs(m1));
    if (cert.m1_symmetric) {
        cert.m1_negative_definite = symmetric_eigenvalues(m1)[2] < 0.0;
    } else {
        const Mat3 sym = 0.5 * (m1 + transpose(m1));
        cert.m1_negative_definite = symmetric_eigenvalues(sym)[2] < 0.0;
    }

    if (!cert.gains_valid) return cert;

    AugmentedIteration it;
    try {
        it = build_augmented(m1, gains);
    } catch (const SingularMatrix&) {
        return cert;
    }
    cert.assembled = true;
    cert.rho = it.rho;
    cert.rho_pass = cert.rho < 1.0;

    cert.spectral_norm = std::sqrt(symmetric_eigenvalues(transpose(it.a) * it.a)[5]);
    cert.conservative_norm = "none";
    if (cert.spectral_norm < 1.0) {
        cert.conservative_bound = cert.asymptotic_bound / (1.0 - cert.spectral_norm);
        cert.conservative_norm = "spectral";
    } else if (cert.rho_pass) {
        // Lyapunov norm: P = A^T P A + I summed by squaring. Exists because
        // rho(A) < 1; gives ||A||_P = sqrt(1 - 1/lmax(P)) < 1 and a
        // Euclidean conversion factor sqrt(cond(P)).
        Mat6 p = Mat6::identity();
        Mat6 m = it.a;
        bool converged = false;
        for (int i = 0; i < 64; ++i) {
            p = p + transpose(m) * p * m;
            m = m * m;
            if (max_abs(m) < 1e-18) {
                converged = true;
                break;
            }
        }
        if (converged) {
            const auto ev = symmetric_eigenvalues(p);
            const double lmax = ev[5], lmin = ev[0];
            const double norm_p = std::sqrt(std::max(0.0, 1.0 - 1.0 / lmax));
            cert.conservative_bound =
                std::sqrt(lmax / lmin) * cert.asymptotic_bound / (1.0 - norm_p);
            cert.conservative_norm = "lyapunov";
        }
    }

    cert.pass = cert.gains_valid && cert.m1_negative_definite && cert.rho_pass;
    return cert;
}

}  // namespace aartilc

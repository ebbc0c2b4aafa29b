// Small fixed-size dense matrices for the between-attempt error algebra.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "aartilc/errors.hpp"
#include "aartilc/vec3.hpp"

namespace aartilc {

template <int N>
struct Mat {
    using Vector = std::array<double, static_cast<std::size_t>(N)>;

    std::array<double, static_cast<std::size_t>(N) * N> a{};

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * N + j]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * N + j]; }

    static Mat identity() {
        Mat m;
        for (int i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }
    static Mat diagonal(const Vector& d) {
        Mat m;
        for (int i = 0; i < N; ++i) m(i, i) = d[i];
        return m;
    }
};

using Mat3 = Mat<3>;
using Mat6 = Mat<6>;

template <int N>
Mat<N> operator+(const Mat<N>& x, const Mat<N>& y) {
    Mat<N> r;
    for (std::size_t i = 0; i < x.a.size(); ++i) r.a[i] = x.a[i] + y.a[i];
    return r;
}

template <int N>
Mat<N> operator-(const Mat<N>& x, const Mat<N>& y) {
    Mat<N> r;
    for (std::size_t i = 0; i < x.a.size(); ++i) r.a[i] = x.a[i] - y.a[i];
    return r;
}

template <int N>
Mat<N> operator*(double s, const Mat<N>& x) {
    Mat<N> r;
    for (std::size_t i = 0; i < x.a.size(); ++i) r.a[i] = s * x.a[i];
    return r;
}

template <int N>
Mat<N> operator*(const Mat<N>& x, const Mat<N>& y) {
    Mat<N> r;
    for (int i = 0; i < N; ++i)
        for (int k = 0; k < N; ++k) {
            const double xik = x(i, k);
            for (int j = 0; j < N; ++j) r(i, j) += xik * y(k, j);
        }
    return r;
}

template <int N>
typename Mat<N>::Vector operator*(const Mat<N>& m, const typename Mat<N>::Vector& v) {
    typename Mat<N>::Vector r{};
    for (int i = 0; i < N; ++i) {
        double s = 0.0;
        for (int j = 0; j < N; ++j) s += m(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

inline Vec3 operator*(const Mat3& m, const Vec3& v) {
    return {m(0, 0) * v.x + m(0, 1) * v.y + m(0, 2) * v.z,
            m(1, 0) * v.x + m(1, 1) * v.y + m(1, 2) * v.z,
            m(2, 0) * v.x + m(2, 1) * v.y + m(2, 2) * v.z};
}

template <int N>
Mat<N> transpose(const Mat<N>& m) {
    Mat<N> r;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) r(j, i) = m(i, j);
    return r;
}

template <int N>
double max_abs(const Mat<N>& m) {
    double r = 0.0;
    for (double v : m.a) r = std::max(r, std::abs(v));
    return r;
}

template <int N>
double frobenius_norm(const Mat<N>& m) {
    double s = 0.0;
    for (double v : m.a) s += v * v;
    return std::sqrt(s);
}

template <int N>
double max_asymmetry(const Mat<N>& m) {
    double r = 0.0;
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j) r = std::max(r, std::abs(m(i, j) - m(j, i)));
    return r;
}

// Adjugate inverse; throws SingularMatrix when |det| vanishes against the scale
// of the matrix.
Mat3 inverse(const Mat3& m);

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
// The input is symmetrized as (A + A^T)/2; callers that care about asymmetry
// must check it beforehand.
template <int N>
typename Mat<N>::Vector symmetric_eigenvalues(Mat<N> m);

extern template Mat<3>::Vector symmetric_eigenvalues<3>(Mat<3>);
extern template Mat<6>::Vector symmetric_eigenvalues<6>(Mat<6>);

}  // namespace aartilc

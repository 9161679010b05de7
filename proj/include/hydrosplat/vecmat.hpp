// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <utility>

namespace hsplat {

template <class A, class B>
using MulT = decltype(std::declval<A>() * std::declval<B>());

template <class T>
struct Vec2 {
    T x{}, y{};
};

template <class T>
struct Vec3 {
    T x{}, y{}, z{};
};

template <class T>
struct Vec4 {
    // Quaternion storage order: (w, x, y, z).
    T w{}, x{}, y{}, z{};
};

using Vec2d = Vec2<double>;
using Vec3d = Vec3<double>;
using Vec4d = Vec4<double>;

template <class A, class B>
inline Vec2<MulT<A, B>> operator+(const Vec2<A>& a, const Vec2<B>& b) {
    return {a.x + b.x, a.y + b.y};
}
template <class A, class B>
inline Vec2<MulT<A, B>> operator-(const Vec2<A>& a, const Vec2<B>& b) {
    return {a.x - b.x, a.y - b.y};
}
template <class A, class B>
inline Vec3<MulT<A, B>> operator+(const Vec3<A>& a, const Vec3<B>& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
}
template <class A, class B>
inline Vec3<MulT<A, B>> operator-(const Vec3<A>& a, const Vec3<B>& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
}
template <class A, class B>
inline Vec3<MulT<A, B>> operator*(const Vec3<A>& a, const B& s) {
    return {a.x * s, a.y * s, a.z * s};
}
template <class A, class B>
inline Vec3<MulT<A, B>> operator*(const A& s, const Vec3<B>& a) {
    return {s * a.x, s * a.y, s * a.z};
}

template <class A, class B>
inline MulT<A, B> dot(const Vec3<A>& a, const Vec3<B>& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

template <class A, class B>
inline Vec3<MulT<A, B>> cross(const Vec3<A>& a, const Vec3<B>& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

template <class T>
inline T norm(const Vec3<T>& v) {
    using std::sqrt;
    return sqrt(dot(v, v));
}

template <class T>
inline Vec3<T> normalized(const Vec3<T>& v) {
    T n = norm(v);
    return {v.x / n, v.y / n, v.z / n};
}

template <class T>
inline T norm(const Vec4<T>& q) {
    using std::sqrt;
    return sqrt(q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z);
}

template <class T>
inline Vec4<T> normalized(const Vec4<T>& q) {
    T n = norm(q);
    return {q.w / n, q.x / n, q.y / n, q.z / n};
}

// Row-major 3x3 matrix.
template <class T>
struct Mat3 {
    std::array<T, 9> m{};

    static Mat3 identity() {
        Mat3 r;
        r.m[0] = T(1);
        r.m[4] = T(1);
        r.m[8] = T(1);
        return r;
    }
    T& at(int r, int c) { return m[r * 3 + c]; }
    const T& at(int r, int c) const { return m[r * 3 + c]; }

    Mat3 transposed() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                r.m[i * 3 + j] = m[j * 3 + i];
        return r;
    }
    Vec3<T> row(int r) const { return {m[r * 3], m[r * 3 + 1], m[r * 3 + 2]}; }
    Vec3<T> col(int c) const { return {m[c], m[3 + c], m[6 + c]}; }
};

using Mat3d = Mat3<double>;

template <class A, class B>
inline Mat3<MulT<A, B>> operator*(const Mat3<A>& a, const Mat3<B>& b) {
    Mat3<MulT<A, B>> r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r.m[i * 3 + j] = a.m[i * 3] * b.m[j] + a.m[i * 3 + 1] * b.m[3 + j] +
                             a.m[i * 3 + 2] * b.m[6 + j];
    return r;
}

template <class A, class B>
inline Vec3<MulT<A, B>> operator*(const Mat3<A>& a, const Vec3<B>& v) {
    return {a.m[0] * v.x + a.m[1] * v.y + a.m[2] * v.z,
            a.m[3] * v.x + a.m[4] * v.y + a.m[5] * v.z,
            a.m[6] * v.x + a.m[7] * v.y + a.m[8] * v.z};
}

// Rotation matrix from a unit quaternion (w, x, y, z).
template <class T>
inline Mat3<T> quat_to_rotmat(const Vec4<T>& q) {
    const T &w = q.w, &x = q.x, &y = q.y, &z = q.z;
    Mat3<T> r;
    r.m[0] = 1.0 - 2.0 * (y * y + z * z);
    r.m[1] = 2.0 * (x * y - w * z);
    r.m[2] = 2.0 * (x * z + w * y);
    r.m[3] = 2.0 * (x * y + w * z);
    r.m[4] = 1.0 - 2.0 * (x * x + z * z);
    r.m[5] = 2.0 * (y * z - w * x);
    r.m[6] = 2.0 * (x * z - w * y);
    r.m[7] = 2.0 * (y * z + w * x);
    r.m[8] = 1.0 - 2.0 * (x * x + y * y);
    return r;
}

// Symmetric 2x2 matrix [[a, b], [b, c]].
template <class T>
struct SymMat2 {
    T a{}, b{}, c{};
};

template <class T>
inline T det(const SymMat2<T>& s) {
    return s.a * s.c - s.b * s.b;
}

// Largest eigenvalue of a symmetric 2x2 (double-valued helper).
inline double sym2_max_eigenvalue(double a, double b, double c) {
    const double half_tr = 0.5 * (a + c);
    const double d = 0.5 * (a - c);
    return half_tr + std::sqrt(d * d + b * b);
}

inline double mat3_det(const Mat3d& a) {
    return a.m[0] * (a.m[4] * a.m[8] - a.m[5] * a.m[7]) -
           a.m[1] * (a.m[3] * a.m[8] - a.m[5] * a.m[6]) +
           a.m[2] * (a.m[3] * a.m[7] - a.m[4] * a.m[6]);
}

inline Mat3d mat3_inverse(const Mat3d& a) {
    const double d = mat3_det(a);
    Mat3d r;
    r.m[0] = (a.m[4] * a.m[8] - a.m[5] * a.m[7]) / d;
    r.m[1] = (a.m[2] * a.m[7] - a.m[1] * a.m[8]) / d;
    r.m[2] = (a.m[1] * a.m[5] - a.m[2] * a.m[4]) / d;
    r.m[3] = (a.m[5] * a.m[6] - a.m[3] * a.m[8]) / d;
    r.m[4] = (a.m[0] * a.m[8] - a.m[2] * a.m[6]) / d;
    r.m[5] = (a.m[2] * a.m[3] - a.m[0] * a.m[5]) / d;
    r.m[6] = (a.m[3] * a.m[7] - a.m[4] * a.m[6]) / d;
    r.m[7] = (a.m[1] * a.m[6] - a.m[0] * a.m[7]) / d;
    r.m[8] = (a.m[0] * a.m[4] - a.m[1] * a.m[3]) / d;
    return r;
}

// Eigenvalues of a symmetric 3x3, ascending. Analytic (trigonometric) form.
inline std::array<double, 3> sym3_eigenvalues(const Mat3d& a) {
    const double p1 = a.m[1] * a.m[1] + a.m[2] * a.m[2] + a.m[5] * a.m[5];
    const double q = (a.m[0] + a.m[4] + a.m[8]) / 3.0;
    if (p1 == 0.0) {
        std::array<double, 3> ev{a.m[0], a.m[4], a.m[8]};
        if (ev[0] > ev[1]) std::swap(ev[0], ev[1]);
        if (ev[1] > ev[2]) std::swap(ev[1], ev[2]);
        if (ev[0] > ev[1]) std::swap(ev[0], ev[1]);
        return ev;
    }
    const double p2 = (a.m[0] - q) * (a.m[0] - q) + (a.m[4] - q) * (a.m[4] - q) +
                      (a.m[8] - q) * (a.m[8] - q) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    Mat3d b;
    for (int i = 0; i < 9; ++i) b.m[i] = a.m[i] / p;
    b.m[0] -= q / p;
    b.m[4] -= q / p;
    b.m[8] -= q / p;
    double r = mat3_det(b) / 2.0;
    r = std::max(-1.0, std::min(1.0, r));
    const double phi = std::acos(r) / 3.0;
    const double e1 = q + 2.0 * p * std::cos(phi);
    const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
    const double e2 = 3.0 * q - e1 - e3;
    return {e3, e2, e1};
}

// Solves the symmetric positive-definite 3x3 system A x = b by Cramer's rule.
inline Vec3d solve3x3(const Mat3d& a, const Vec3d& b) {
    return mat3_inverse(a) * b;
}

}  // namespace hsplat

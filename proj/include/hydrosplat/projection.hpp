// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hydrosplat/autodiff.hpp"
#include "hydrosplat/camera.hpp"
#include "hydrosplat/vecmat.hpp"

namespace hsplat {

inline constexpr double kMinDepth = 1e-6;  // epsilon_z: points at or behind this are culled
inline constexpr double kScreenCovFloor = 0.3;  // isotropic anti-alias floor, px^2

template <class T>
struct ProjectedPoint {
    Vec2<T> pixel{};
    T z{};
    bool behind = false;  // z <= kMinDepth; pixel is then meaningless
};

template <class T>
inline ProjectedPoint<T> project_point(const CameraView& cam, const Vec3<T>& x_world) {
    const Vec3<T> p = cam.R * x_world;
    const Vec3<T> pc{p.x + cam.t.x, p.y + cam.t.y, p.z + cam.t.z};
    ProjectedPoint<T> out;
    out.z = pc.z;
    if (value_of(pc.z) <= kMinDepth) {
        out.behind = true;
        return out;
    }
    out.pixel.x = cam.fx() * (pc.x / pc.z) + cam.cx();
    out.pixel.y = cam.fy() * (pc.y / pc.z) + cam.cy();
    return out;
}

// First-order (Jacobian) projection of a world covariance to screen space:
// Sigma' = J W Sigma W^T J^T + floor * I, with J the perspective Jacobian at
// the camera-space center.
template <class T>
inline SymMat2<T> project_covariance(const CameraView& cam, const Mat3<T>& sigma_world,
                                     const Vec3<T>& p_cam) {
    const Mat3<T> sigma_cam_full = cam.R * sigma_world * cam.R.transposed();
    const T inv_z = 1.0 / p_cam.z;
    const T inv_z2 = inv_z * inv_z;
    // J = [fx/z, 0, -fx x/z^2; 0, fy/z, -fy y/z^2]
    const T j00 = cam.fx() * inv_z;
    const T j02 = -cam.fx() * p_cam.x * inv_z2;
    const T j11 = cam.fy() * inv_z;
    const T j12 = -cam.fy() * p_cam.y * inv_z2;

    const auto& s = sigma_cam_full.m;
    // Row vectors J S (only rows 0 and 1 of the 3x3 product are needed).
    const T r0x = j00 * s[0] + j02 * s[6];
    const T r0y = j00 * s[1] + j02 * s[7];
    const T r0z = j00 * s[2] + j02 * s[8];
    const T r1x = j11 * s[3] + j12 * s[6];
    const T r1y = j11 * s[4] + j12 * s[7];
    const T r1z = j11 * s[5] + j12 * s[8];

    SymMat2<T> out;
    out.a = r0x * j00 + r0z * j02 + kScreenCovFloor;
    out.b = r0y * j11 + r0z * j12;
    out.c = r1y * j11 + r1z * j12 + kScreenCovFloor;
    return out;
}

// Camera-space position R x + t as the scalar type of the input point.
template <class T>
inline Vec3<T> to_camera(const CameraView& cam, const Vec3<T>& x_world) {
    const Vec3<T> p = cam.R * x_world;
    return {p.x + cam.t.x, p.y + cam.t.y, p.z + cam.t.z};
}

inline bool pixel_in_image(const CameraView& cam, const Vec2d& px) {
    return px.x >= 0.0 && px.x <= cam.width - 1.0 && px.y >= 0.0 && px.y <= cam.height - 1.0;
}

}  // namespace hsplat

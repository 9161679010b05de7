// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hydrosplat/vecmat.hpp"

namespace hsplat {

// Pinhole camera. R, t map world to camera coordinates; pixel centers sit at
// integer coordinates, so a W-pixel row spans [0, W-1].
struct CameraView {
    Mat3d K = Mat3d::identity();  // [fx 0 cx; 0 fy cy; 0 0 1]
    Mat3d R = Mat3d::identity();
    Vec3d t{};
    int width = 0, height = 0;

    double fx() const { return K.m[0]; }
    double fy() const { return K.m[4]; }
    double cx() const { return K.m[2]; }
    double cy() const { return K.m[5]; }

    Vec3d center() const { return -1.0 * (R.transposed() * t); }

    // World-space unit direction of the ray through pixel (x, y).
    Vec3d pixel_ray(double x, double y) const {
        const Vec3d d_cam{(x - cx()) / fx(), (y - cy()) / fy(), 1.0};
        return normalized(R.transposed() * d_cam);
    }

    // Camera for rendering at 1/divisor resolution. Maps pixel centers
    // exactly: a full-res coordinate u corresponds to (u + 0.5)/d - 0.5.
    CameraView downscaled(int divisor) const {
        if (divisor <= 1) return *this;
        CameraView c = *this;
        const double d = divisor;
        c.K.m[0] = fx() / d;
        c.K.m[4] = fy() / d;
        c.K.m[2] = (cx() + 0.5) / d - 0.5;
        c.K.m[5] = (cy() + 0.5) / d - 0.5;
        c.width = width / divisor;
        c.height = height / divisor;
        return c;
    }
};

inline void validate_camera(const CameraView& cam) {
    if (cam.fx() <= 0.0 || cam.fy() <= 0.0)
        throw std::invalid_argument("CameraView: focal lengths must be positive");
    if (cam.width <= 0 || cam.height <= 0)
        throw std::invalid_argument("CameraView: non-positive image size");
    const Mat3d rrt = cam.R * cam.R.transposed();
    const Mat3d id = Mat3d::identity();
    for (int i = 0; i < 9; ++i)
        if (std::abs(rrt.m[i] - id.m[i]) > 1e-9)
            throw std::invalid_argument("CameraView: R is not orthonormal");
}

// 3x4 projection matrix M = K [R | t].
inline std::array<double, 12> projection_matrix(const CameraView& cam) {
    std::array<double, 12> m{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += cam.K.m[i * 3 + k] * cam.R.m[k * 3 + j];
            m[i * 4 + j] = s;
        }
        m[i * 4 + 3] = cam.K.m[i * 3] * cam.t.x + cam.K.m[i * 3 + 1] * cam.t.y +
                       cam.K.m[i * 3 + 2] * cam.t.z;
    }
    return m;
}

// Virtual stereo poses: the extrinsic transform is left-composed with a pure
// translation along the camera x (horizontal) or y (vertical) axis, so
// x_cam' = x_cam + t_b. Intrinsics and image size are shared.
inline std::pair<CameraView, CameraView> make_virtual_poses(const CameraView& cam, double b_h,
                                                            double b_v) {
    CameraView ph = cam, pv = cam;
    ph.t.x += b_h;
    pv.t.y += b_v;
    return {ph, pv};
}

// ---- camera file ----
//
// Plain text, "hsplat-cameras 1" header, then per camera:
//   K (9 row-major) / R (9 row-major) / t (3) / size W H

inline void save_cameras(const std::vector<CameraView>& cams, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("save_cameras: cannot open " + path);
    f.precision(17);
    f << "hsplat-cameras 1\ncount " << cams.size() << "\n";
    for (const auto& c : cams) {
        f << "K";
        for (double v : c.K.m) f << ' ' << v;
        f << "\nR";
        for (double v : c.R.m) f << ' ' << v;
        f << "\nt " << c.t.x << ' ' << c.t.y << ' ' << c.t.z;
        f << "\nsize " << c.width << ' ' << c.height << "\n";
    }
    if (!f) throw std::runtime_error("save_cameras: write failed for " + path);
}

inline std::vector<CameraView> load_cameras(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("load_cameras: cannot open " + path);
    std::string magic, key;
    int version = 0;
    size_t n = 0;
    f >> magic >> version >> key >> n;
    if (magic != "hsplat-cameras" || version != 1 || key != "count")
        throw std::runtime_error("load_cameras: bad header in " + path);
    std::vector<CameraView> cams(n);
    for (size_t i = 0; i < n; ++i) {
        auto expect = [&](const char* tag) {
            f >> key;
            if (key != tag) throw std::runtime_error("load_cameras: expected " + std::string(tag));
        };
        expect("K");
        for (double& v : cams[i].K.m) f >> v;
        expect("R");
        for (double& v : cams[i].R.m) f >> v;
        expect("t");
        f >> cams[i].t.x >> cams[i].t.y >> cams[i].t.z;
        expect("size");
        f >> cams[i].width >> cams[i].height;
        validate_camera(cams[i]);
    }
    if (!f) throw std::runtime_error("load_cameras: truncated file " + path);
    return cams;
}

}  // namespace hsplat

// SPDX-License-Identifier: Apache-2.0
//
// Gaussian primitives and the scene container. Scales are stored as logs and
// opacity as a logit so every parameter is unconstrained; rotations are kept
// unit-norm by renormalizing after each optimizer update.
#pragma once

#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hydrosplat/autodiff.hpp"
#include "hydrosplat/vecmat.hpp"

namespace hsplat {

struct GaussianPrimitive {
    Vec3d mu{};                  // world-space center
    Vec3d log_scale{};           // per-axis log standard deviation
    Vec4d rotation{1, 0, 0, 0};  // unit quaternion (w, x, y, z)
    double opacity_logit = 0.0;  // alpha = sigmoid(opacity_logit)
    Vec3d color{};               // RGB in [0,1]

    double opacity() const { return sigmoid(opacity_logit); }
};

// Screen-space positional gradient statistics driving densification.
struct GradAccum {
    double mean2d_grad_norm = 0.0;
    int count = 0;
};

struct GaussianCloud {
    std::vector<GaussianPrimitive> primitives;
    std::vector<GradAccum> grad_accum;

    size_t size() const { return primitives.size(); }

    void reset_grad_accum() { grad_accum.assign(primitives.size(), GradAccum{}); }

    // Axis-aligned bounding extent of the centers (largest side length).
    double extent() const {
        if (primitives.empty()) return 1.0;
        Vec3d lo = primitives[0].mu, hi = primitives[0].mu;
        for (const auto& g : primitives) {
            lo.x = std::min(lo.x, g.mu.x);
            lo.y = std::min(lo.y, g.mu.y);
            lo.z = std::min(lo.z, g.mu.z);
            hi.x = std::max(hi.x, g.mu.x);
            hi.y = std::max(hi.y, g.mu.y);
            hi.z = std::max(hi.z, g.mu.z);
        }
        return std::max({hi.x - lo.x, hi.y - lo.y, hi.z - lo.z, 1e-6});
    }
};

// Sigma = R diag(exp(2 * log_scale)) R^T.
template <class T>
inline Mat3<T> covariance_from(const Vec3<T>& log_scale, const Vec4<T>& rotation) {
    using std::exp;
    const Mat3<T> r = quat_to_rotmat(rotation);
    const Vec3<T> s2{exp(2.0 * log_scale.x), exp(2.0 * log_scale.y), exp(2.0 * log_scale.z)};
    // R * diag(s2) * R^T
    Mat3<T> rs;
    for (int i = 0; i < 3; ++i) {
        rs.m[i * 3 + 0] = r.m[i * 3 + 0] * s2.x;
        rs.m[i * 3 + 1] = r.m[i * 3 + 1] * s2.y;
        rs.m[i * 3 + 2] = r.m[i * 3 + 2] * s2.z;
    }
    return rs * r.transposed();
}

inline Mat3d covariance_of(const GaussianPrimitive& g) {
    return covariance_from(g.log_scale, g.rotation);
}

// G(X) = exp(-1/2 (X-mu)^T Sigma^-1 (X-mu)), evaluated through the factored
// form |diag(exp(-s)) R^T (X-mu)|^2 so no matrix inverse is formed. Scales
// below the eigenvalue floor are clamped (and flagged when a pointer is
// given).
template <class T>
inline T eval_gaussian(const Vec3<T>& mu, const Vec3<T>& log_scale, const Vec4<T>& rotation,
                       const Vec3<T>& x, double min_eigenvalue = 1e-7,
                       bool* clamped = nullptr) {
    using std::exp;
    using std::sqrt;
    const Mat3<T> r = quat_to_rotmat(rotation);
    const Vec3<T> d = x - mu;
    const Vec3<T> local = r.transposed() * d;
    const double sigma_floor = std::sqrt(min_eigenvalue);
    T q{};
    const T* ls[3] = {&log_scale.x, &log_scale.y, &log_scale.z};
    const T* lc[3] = {&local.x, &local.y, &local.z};
    for (int i = 0; i < 3; ++i) {
        T s = exp(*ls[i]);
        if (value_of(s) < sigma_floor) {
            if (clamped) *clamped = true;
            s = max_with(s, sigma_floor);
        }
        const T y = *lc[i] / s;
        q = q + y * y;
    }
    return exp(-0.5 * q);
}

inline double eval_gaussian(const GaussianPrimitive& g, const Vec3d& x,
                            double min_eigenvalue = 1e-7, bool* clamped = nullptr) {
    return eval_gaussian<double>(g.mu, g.log_scale, g.rotation, x, min_eigenvalue, clamped);
}

// ---- initialization ----

struct InitSpec {
    // Either an explicit point list (positions + colors), or a random draw of
    // `count` primitives inside [bounds_lo, bounds_hi].
    std::vector<Vec3d> points;
    std::vector<Vec3d> point_colors;
    int count = 0;
    Vec3d bounds_lo{}, bounds_hi{};
    double initial_opacity = 0.1;
    // Log-scale initialization: mean distance to the nearest neighbor,
    // clamped to at least min_scale.
    double min_scale = 1e-3;
};

inline GaussianCloud init_cloud(const InitSpec& spec, uint64_t seed) {
    GaussianCloud cloud;
    std::vector<Vec3d> pos;
    std::vector<Vec3d> col;
    if (!spec.points.empty()) {
        pos = spec.points;
        col = spec.point_colors;
        if (col.empty()) col.assign(pos.size(), Vec3d{0.5, 0.5, 0.5});
        if (col.size() != pos.size())
            throw std::invalid_argument("init_cloud: point/color count mismatch");
    } else {
        const Vec3d ext = spec.bounds_hi - spec.bounds_lo;
        if (spec.count <= 0 || ext.x <= 0 || ext.y <= 0 || ext.z <= 0)
            throw std::invalid_argument("init_cloud: empty bounds");
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        pos.resize(spec.count);
        col.resize(spec.count);
        for (int i = 0; i < spec.count; ++i) {
            pos[i] = {spec.bounds_lo.x + u01(rng) * ext.x, spec.bounds_lo.y + u01(rng) * ext.y,
                      spec.bounds_lo.z + u01(rng) * ext.z};
            col[i] = {u01(rng), u01(rng), u01(rng)};
        }
    }

    const size_t n = pos.size();
    cloud.primitives.resize(n);
    // Nearest-neighbor distance sets the initial footprint (O(n^2), fine at
    // this scale).
    for (size_t i = 0; i < n; ++i) {
        double best = 1e30;
        for (size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const Vec3d d = pos[i] - pos[j];
            best = std::min(best, dot(d, d));
        }
        const double nn = n > 1 ? std::sqrt(best) : 0.1;
        auto& g = cloud.primitives[i];
        g.mu = pos[i];
        const double s = std::max(nn, spec.min_scale);
        g.log_scale = {std::log(s), std::log(s), std::log(s)};
        g.rotation = {1, 0, 0, 0};
        g.opacity_logit = std::log(spec.initial_opacity / (1.0 - spec.initial_opacity));
        g.color = col[i];
    }
    cloud.reset_grad_accum();
    return cloud;
}

// ---- serialization ----
//
// Plain-text scene file, lossless for 64-bit doubles (%.17g):
//   line 1: "hsplat-scene 1"
//   line 2: "count N"
//   then one primitive per line:
//   mu(3) log_scale(3) rotation(4, wxyz) opacity_logit color(3)

inline void save_cloud(const GaussianCloud& cloud, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("save_cloud: cannot open " + path);
    f << "hsplat-scene 1\n";
    f << "count " << cloud.primitives.size() << "\n";
    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        f << buf;
    };
    for (const auto& g : cloud.primitives) {
        const double vals[14] = {g.mu.x,          g.mu.y,          g.mu.z,        g.log_scale.x,
                                 g.log_scale.y,   g.log_scale.z,   g.rotation.w,  g.rotation.x,
                                 g.rotation.y,    g.rotation.z,    g.opacity_logit, g.color.x,
                                 g.color.y,       g.color.z};
        for (int i = 0; i < 14; ++i) {
            if (i) f << ' ';
            put(vals[i]);
        }
        f << "\n";
    }
    if (!f) throw std::runtime_error("save_cloud: write failed for " + path);
}

inline GaussianCloud load_cloud(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("load_cloud: cannot open " + path);
    std::string magic;
    int version = 0;
    f >> magic >> version;
    if (magic != "hsplat-scene" || version != 1)
        throw std::runtime_error("load_cloud: bad header in " + path);
    std::string key;
    size_t n = 0;
    f >> key >> n;
    if (key != "count") throw std::runtime_error("load_cloud: missing count in " + path);
    GaussianCloud cloud;
    cloud.primitives.resize(n);
    for (size_t i = 0; i < n; ++i) {
        auto& g = cloud.primitives[i];
        f >> g.mu.x >> g.mu.y >> g.mu.z >> g.log_scale.x >> g.log_scale.y >> g.log_scale.z >>
            g.rotation.w >> g.rotation.x >> g.rotation.y >> g.rotation.z >> g.opacity_logit >>
            g.color.x >> g.color.y >> g.color.z;
    }
    if (!f) throw std::runtime_error("load_cloud: truncated file " + path);
    cloud.reset_grad_accum();
    return cloud;
}

}  // namespace hsplat

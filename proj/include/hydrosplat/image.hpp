// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace hsplat {

// Row-major, channel-interleaved image of an arbitrary scalar type.
template <class T>
class Image {
public:
    Image() = default;
    Image(int height, int width, int channels)
        : h_(height), w_(width), c_(channels),
          data_(static_cast<size_t>(height) * width * channels) {
        if (height <= 0 || width <= 0 || channels <= 0)
            throw std::invalid_argument("Image: non-positive dimensions");
    }

    int height() const { return h_; }
    int width() const { return w_; }
    int channels() const { return c_; }
    bool empty() const { return data_.empty(); }
    size_t size() const { return data_.size(); }

    T& at(int y, int x, int ch = 0) { return data_[(static_cast<size_t>(y) * w_ + x) * c_ + ch]; }
    const T& at(int y, int x, int ch = 0) const {
        return data_[(static_cast<size_t>(y) * w_ + x) * c_ + ch];
    }

    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

    bool same_shape(const Image& o) const { return h_ == o.h_ && w_ == o.w_ && c_ == o.c_; }

private:
    int h_ = 0, w_ = 0, c_ = 0;
    std::vector<T> data_;
};

using Imaged = Image<double>;
using Imagef = Image<float>;

// Per-pixel validity. False pixels are excluded from every loss sum.
class Mask {
public:
    Mask() = default;
    Mask(int height, int width, bool initial = true)
        : h_(height), w_(width), m_(static_cast<size_t>(height) * width, initial ? 1 : 0) {}

    int height() const { return h_; }
    int width() const { return w_; }
    bool at(int y, int x) const { return m_[static_cast<size_t>(y) * w_ + x] != 0; }
    void set(int y, int x, bool v) { m_[static_cast<size_t>(y) * w_ + x] = v ? 1 : 0; }

    size_t count() const {
        size_t n = 0;
        for (uint8_t v : m_) n += v;
        return n;
    }
    double coverage() const { return m_.empty() ? 0.0 : double(count()) / double(m_.size()); }

    Mask operator&(const Mask& o) const {
        Mask r(h_, w_);
        for (size_t i = 0; i < m_.size(); ++i) r.m_[i] = m_[i] & o.m_[i];
        return r;
    }

private:
    int h_ = 0, w_ = 0;
    std::vector<uint8_t> m_;
};

}  // namespace hsplat

// SPDX-License-Identifier: Apache-2.0
//
// Scalar reverse-mode tape. The whole forward pipeline is written against a
// generic scalar type; instantiating it with Var records every operation on a
// Tape, instantiating it with double evaluates plainly. Partial derivatives
// are computed at record time, so backward() is a single reverse sweep.
#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace hsplat {

class Tape {
public:
    static constexpr uint32_t kNone = 0xffffffffu;

    uint32_t add_leaf(double v) {
        parent_a_.push_back(kNone);
        parent_b_.push_back(kNone);
        da_.push_back(0.0);
        db_.push_back(0.0);
        val_.push_back(v);
        return static_cast<uint32_t>(val_.size() - 1);
    }
    // A constant participates in the graph but propagates no gradient.
    uint32_t add_constant(double v) { return add_leaf(v); }

    uint32_t add_unary(uint32_t a, double da, double v) {
        parent_a_.push_back(a);
        parent_b_.push_back(kNone);
        da_.push_back(da);
        db_.push_back(0.0);
        val_.push_back(v);
        return static_cast<uint32_t>(val_.size() - 1);
    }

    uint32_t add_binary(uint32_t a, uint32_t b, double da, double db, double v) {
        parent_a_.push_back(a);
        parent_b_.push_back(b);
        da_.push_back(da);
        db_.push_back(db);
        val_.push_back(v);
        return static_cast<uint32_t>(val_.size() - 1);
    }

    double value(uint32_t i) const { return val_[i]; }
    size_t size() const { return val_.size(); }

    // Reverse sweep from `root`, seeding d(root)/d(root) = 1.
    void backward(uint32_t root) {
        grad_.assign(val_.size(), 0.0);
        grad_[root] = 1.0;
        for (uint32_t i = root + 1; i-- > 0;) {
            const double g = grad_[i];
            if (g == 0.0) continue;
            const uint32_t a = parent_a_[i];
            if (a != kNone) {
                grad_[a] += da_[i] * g;
                const uint32_t b = parent_b_[i];
                if (b != kNone) grad_[b] += db_[i] * g;
            }
        }
    }

    double gradient(uint32_t i) const { return grad_[i]; }

    void reset() {
        parent_a_.clear();
        parent_b_.clear();
        da_.clear();
        db_.clear();
        val_.clear();
        grad_.clear();
    }

    void reserve(size_t n) {
        parent_a_.reserve(n);
        parent_b_.reserve(n);
        da_.reserve(n);
        db_.reserve(n);
        val_.reserve(n);
    }

private:
    std::vector<uint32_t> parent_a_, parent_b_;
    std::vector<double> da_, db_;
    std::vector<double> val_;
    std::vector<double> grad_;
};

// Handle to a tape node. A default-constructed Var is the literal zero; it
// carries no node and absorbs/annihilates in arithmetic, which keeps
// accumulator loops cheap.
struct Var {
    Tape* tape = nullptr;
    uint32_t idx = 0;

    bool is_zero() const { return tape == nullptr; }
    double value() const { return tape ? tape->value(idx) : 0.0; }
};

inline Var make_leaf(Tape& t, double v) { return {&t, t.add_leaf(v)}; }
inline Var make_constant(Tape& t, double v) { return {&t, t.add_constant(v)}; }

inline double value_of(double x) { return x; }
inline double value_of(const Var& x) { return x.value(); }

// ---- arithmetic ----

inline Var operator+(const Var& a, const Var& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    return {a.tape, a.tape->add_binary(a.idx, b.idx, 1.0, 1.0, a.value() + b.value())};
}

inline Var operator-(const Var& a) {
    if (a.is_zero()) return a;
    return {a.tape, a.tape->add_unary(a.idx, -1.0, -a.value())};
}

inline Var operator-(const Var& a, const Var& b) {
    if (b.is_zero()) return a;
    if (a.is_zero()) return -b;
    return {a.tape, a.tape->add_binary(a.idx, b.idx, 1.0, -1.0, a.value() - b.value())};
}

inline Var operator*(const Var& a, const Var& b) {
    if (a.is_zero() || b.is_zero()) return Var{};
    return {a.tape, a.tape->add_binary(a.idx, b.idx, b.value(), a.value(), a.value() * b.value())};
}

inline Var operator*(const Var& a, double s) {
    if (a.is_zero() || s == 0.0) return Var{};
    return {a.tape, a.tape->add_unary(a.idx, s, a.value() * s)};
}
inline Var operator*(double s, const Var& a) { return a * s; }

inline Var operator/(const Var& a, const Var& b) {
    assert(!b.is_zero() && "division by literal zero Var");
    if (a.is_zero()) return Var{};
    const double bv = b.value();
    const double v = a.value() / bv;
    return {a.tape, a.tape->add_binary(a.idx, b.idx, 1.0 / bv, -v / bv, v)};
}

inline Var operator/(const Var& a, double s) { return a * (1.0 / s); }

inline Var operator/(double s, const Var& b) {
    assert(!b.is_zero());
    const double bv = b.value();
    const double v = s / bv;
    return {b.tape, b.tape->add_unary(b.idx, -v / bv, v)};
}

inline Var operator+(const Var& a, double s) {
    if (s == 0.0) return a;
    assert(a.tape && "constant add to empty accumulator");
    return {a.tape, a.tape->add_unary(a.idx, 1.0, a.value() + s)};
}
inline Var operator+(double s, const Var& a) { return a + s; }

inline Var operator-(const Var& a, double s) { return a + (-s); }

inline Var operator-(double s, const Var& a) {
    assert(a.tape);
    return {a.tape, a.tape->add_unary(a.idx, -1.0, s - a.value())};
}

inline Var& operator+=(Var& a, const Var& b) { return a = a + b; }
inline Var& operator-=(Var& a, const Var& b) { return a = a - b; }
inline Var& operator*=(Var& a, const Var& b) { return a = a * b; }

// ---- elementary functions (Var + matching double overloads) ----

inline Var exp(const Var& a) {
    assert(a.tape);
    const double v = std::exp(a.value());
    return {a.tape, a.tape->add_unary(a.idx, v, v)};
}

inline Var log(const Var& a) {
    assert(a.tape);
    return {a.tape, a.tape->add_unary(a.idx, 1.0 / a.value(), std::log(a.value()))};
}

inline Var log1p(const Var& a) {
    if (a.is_zero()) return a;
    return {a.tape, a.tape->add_unary(a.idx, 1.0 / (1.0 + a.value()), std::log1p(a.value()))};
}

inline Var sqrt(const Var& a) {
    assert(a.tape);
    const double v = std::sqrt(a.value());
    return {a.tape, a.tape->add_unary(a.idx, 0.5 / v, v)};
}

// d|x|/dx with the subgradient 0 at x = 0.
inline Var abs(const Var& a) {
    if (a.is_zero()) return a;
    const double v = a.value();
    const double s = v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
    return {a.tape, a.tape->add_unary(a.idx, s, std::abs(v))};
}

inline Var sin(const Var& a) {
    assert(a.tape);
    return {a.tape, a.tape->add_unary(a.idx, std::cos(a.value()), std::sin(a.value()))};
}

inline Var cos(const Var& a) {
    assert(a.tape);
    return {a.tape, a.tape->add_unary(a.idx, -std::sin(a.value()), std::cos(a.value()))};
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline Var sigmoid(const Var& a) {
    assert(a.tape);
    const double v = sigmoid(a.value());
    return {a.tape, a.tape->add_unary(a.idx, v * (1.0 - v), v)};
}

inline double softplus(double x) { return x > 30.0 ? x : std::log1p(std::exp(x)); }

inline Var softplus(const Var& a) {
    assert(a.tape);
    return {a.tape, a.tape->add_unary(a.idx, sigmoid(a.value()), softplus(a.value()))};
}

inline double relu(double x) { return x > 0.0 ? x : 0.0; }

inline Var relu(const Var& a) { return value_of(a) > 0.0 ? a : Var{}; }

// min(x, c): pass-through below the cap, constant (zero slope) above it.
inline double min_with(double x, double c) { return x < c ? x : c; }

inline Var min_with(const Var& a, double c) {
    if (value_of(a) < c) return a;
    assert(a.tape);
    return {a.tape, a.tape->add_unary(a.idx, 0.0, c)};
}

inline double max_with(double x, double c) { return x > c ? x : c; }

inline Var max_with(const Var& a, double c) {
    if (value_of(a) > c) return a;
    assert(a.tape);
    return {a.tape, a.tape->add_unary(a.idx, 0.0, c)};
}

// ---- stop-gradient trace ----
//
// sg() passes values forward and cuts the gradient path. The trace makes the
// cut reproducible for finite-difference probes: a capture pass records every
// stopped value (and frozen index list) in encounter order; replay passes --
// the double-valued f(theta +/- h) evaluations -- consume the recorded values
// instead of their perturbed recomputations, so FD measures exactly the
// derivative the tape reports.
struct SgTrace {
    enum class Mode { kCapture, kReplay };
    Mode mode = Mode::kCapture;
    std::vector<double> values;
    std::vector<std::vector<uint32_t>> lists;
    size_t cursor = 0;
    size_t list_cursor = 0;

    void rewind() {
        cursor = 0;
        list_cursor = 0;
        mode = Mode::kReplay;
    }

    double scalar(double live) {
        if (mode == Mode::kCapture) {
            values.push_back(live);
            return live;
        }
        if (cursor >= values.size()) throw std::runtime_error("SgTrace: replay past end");
        return values[cursor++];
    }

    std::vector<uint32_t> indices(std::vector<uint32_t> live) {
        if (mode == Mode::kCapture) {
            lists.push_back(live);
            return live;
        }
        if (list_cursor >= lists.size()) throw std::runtime_error("SgTrace: replay past end");
        return lists[list_cursor++];
    }
};

inline double sg(double x, SgTrace* trace) { return trace ? trace->scalar(x) : x; }

inline Var sg(const Var& x, SgTrace* trace) {
    const double v = trace ? trace->scalar(x.value()) : x.value();
    if (!x.tape) return Var{};
    return make_constant(*x.tape, v);
}

// A detached scalar: forward value only, no gradient, frozen under FD replay.
inline double detach(double x, SgTrace* trace) { return trace ? trace->scalar(x) : x; }
inline double detach(const Var& x, SgTrace* trace) {
    return trace ? trace->scalar(x.value()) : x.value();
}

}  // namespace hsplat

// SPDX-License-Identifier: Apache-2.0
#include "hydrosplat/autodiff.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hydrosplat/vecmat.hpp"

namespace hsplat {
namespace {

// Central finite difference of a scalar function of one variable.
template <class F>
double fd(F f, double x, double h = 1e-6) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

TEST(Tape, BasicArithmetic) {
    Tape tape;
    Var x = make_leaf(tape, 3.0);
    Var y = make_leaf(tape, -2.0);
    Var z = (x * y + 5.0) * x - y / x;
    EXPECT_DOUBLE_EQ(z.value(), (3.0 * -2.0 + 5.0) * 3.0 - (-2.0 / 3.0));
    tape.backward(z.idx);
    // dz/dx = 2xy + 5 + y/x^2, dz/dy = x^2 - 1/x
    EXPECT_NEAR(tape.gradient(x.idx), 2.0 * 3.0 * -2.0 + 5.0 + (-2.0) / 9.0, 1e-12);
    EXPECT_NEAR(tape.gradient(y.idx), 9.0 - 1.0 / 3.0, 1e-12);
}

TEST(Tape, ElementaryFunctionsMatchFiniteDifferences) {
    struct Case {
        const char* name;
        double x0;
        Var (*fn)(const Var&);
        double (*ref)(double);
    };
    auto run = [](double x0, auto vfn, auto dfn) {
        Tape tape;
        Var x = make_leaf(tape, x0);
        Var y = vfn(x);
        tape.backward(y.idx);
        const double g = tape.gradient(x.idx);
        const double gf = fd(dfn, x0);
        EXPECT_NEAR(g, gf, 1e-6 * std::max(1.0, std::abs(gf)));
    };
    run(0.7, [](Var v) { return exp(v); }, [](double v) { return std::exp(v); });
    run(0.7, [](Var v) { return log(v); }, [](double v) { return std::log(v); });
    run(0.7, [](Var v) { return sqrt(v); }, [](double v) { return std::sqrt(v); });
    run(0.7, [](Var v) { return sigmoid(v); }, [](double v) { return sigmoid(v); });
    run(-1.3, [](Var v) { return softplus(v); }, [](double v) { return softplus(v); });
    run(0.7, [](Var v) { return sin(v); }, [](double v) { return std::sin(v); });
    run(0.7, [](Var v) { return cos(v); }, [](double v) { return std::cos(v); });
    run(-0.4, [](Var v) { return abs(v); }, [](double v) { return std::abs(v); });
    run(0.9, [](Var v) { return log1p(v); }, [](double v) { return std::log1p(v); });
}

TEST(Tape, ZeroVarConventions) {
    Tape tape;
    Var zero;
    Var x = make_leaf(tape, 2.0);
    EXPECT_TRUE((zero + x).idx == x.idx);
    EXPECT_TRUE((x * zero).is_zero());
    EXPECT_TRUE(relu(zero).is_zero());
    Var acc;
    for (int i = 0; i < 3; ++i) acc = acc + x * double(i + 1);
    EXPECT_DOUBLE_EQ(acc.value(), 2.0 * 6.0);
    tape.backward(acc.idx);
    EXPECT_DOUBLE_EQ(tape.gradient(x.idx), 6.0);
}

TEST(Tape, MinWithCapAndRelu) {
    Tape tape;
    Var x = make_leaf(tape, 0.5);
    Var capped = min_with(x, 0.999);
    EXPECT_EQ(capped.idx, x.idx);  // below the cap: pass-through, no node
    Var y = make_leaf(tape, 2.0);
    Var capped2 = min_with(y, 0.999);
    EXPECT_DOUBLE_EQ(capped2.value(), 0.999);
    Var s = capped2 * 3.0;
    tape.backward(s.idx);
    EXPECT_DOUBLE_EQ(tape.gradient(y.idx), 0.0);
    EXPECT_DOUBLE_EQ(relu(make_leaf(tape, -1.0)).value(), 0.0);
}

TEST(Tape, StopGradientCutsPath) {
    // f = x * sg(x): df/dx must be sg(x) = x0, not 2 x0.
    Tape tape;
    Var x = make_leaf(tape, 1.7);
    Var y = x * sg(x, nullptr);
    tape.backward(y.idx);
    EXPECT_DOUBLE_EQ(tape.gradient(x.idx), 1.7);
}

TEST(Tape, SgTraceCaptureReplay) {
    SgTrace trace;
    // Capture pass (as the tape pass would do).
    EXPECT_DOUBLE_EQ(sg(3.0, &trace), 3.0);
    EXPECT_DOUBLE_EQ(sg(4.0, &trace), 4.0);
    trace.rewind();
    // Replay returns recorded values regardless of the live ones.
    EXPECT_DOUBLE_EQ(sg(99.0, &trace), 3.0);
    EXPECT_DOUBLE_EQ(sg(98.0, &trace), 4.0);
    EXPECT_THROW(sg(1.0, &trace), std::runtime_error);
}

TEST(Tape, BackwardIsDeterministic) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Tape tape;
    std::vector<Var> xs;
    for (int i = 0; i < 20; ++i) xs.push_back(make_leaf(tape, u(rng)));
    Var acc;
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j) acc = acc + sigmoid(xs[i] * xs[j]) * 0.01;
    tape.backward(acc.idx);
    std::vector<double> g1;
    for (auto& x : xs) g1.push_back(tape.gradient(x.idx));
    tape.backward(acc.idx);
    for (int i = 0; i < 20; ++i) EXPECT_EQ(g1[i], tape.gradient(xs[i].idx));
}

TEST(VecMat, QuatRotationIsOrthonormal) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        Vec4d q = normalized(Vec4d{n(rng), n(rng), n(rng), n(rng)});
        Mat3d r = quat_to_rotmat(q);
        Mat3d rrt = r * r.transposed();
        Mat3d id = Mat3d::identity();
        for (int i = 0; i < 9; ++i) EXPECT_NEAR(rrt.m[i], id.m[i], 1e-12);
        EXPECT_NEAR(mat3_det(r), 1.0, 1e-12);
    }
}

TEST(VecMat, Sym3EigenvaluesOfDiagonal) {
    Mat3d a{};
    a.m[0] = 4.0;
    a.m[4] = 1.0;
    a.m[8] = 9.0;
    auto ev = sym3_eigenvalues(a);
    EXPECT_NEAR(ev[0], 1.0, 1e-12);
    EXPECT_NEAR(ev[1], 4.0, 1e-12);
    EXPECT_NEAR(ev[2], 9.0, 1e-12);
}

TEST(VecMat, SolveAndInverse) {
    Mat3d a{};
    a.m = {4, 1, 0, 1, 3, 1, 0, 1, 2};
    Vec3d b{1, 2, 3};
    Vec3d x = solve3x3(a, b);
    Vec3d r = a * x;
    EXPECT_NEAR(r.x, b.x, 1e-12);
    EXPECT_NEAR(r.y, b.y, 1e-12);
    EXPECT_NEAR(r.z, b.z, 1e-12);
}

}  // namespace
}  // namespace hsplat

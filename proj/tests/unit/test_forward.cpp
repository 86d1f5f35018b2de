#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "hip/errors.hpp"
#include "hip/forward.hpp"
#include "hip/presets.hpp"
#include "oracles.hpp"

using namespace hip;

namespace {

ForwardOptions tight() {
    ForwardOptions o;
    o.solver.rel_tol = 1e-13;
    o.solver.max_iter_factor = 50;
    return o;
}

double rel(const ScalarField& a, const ScalarField& b) { return l2_norm(a - b) / l2_norm(b); }

}  // namespace

TEST(Exponent, Range) {
    for (double p : {0.0, -0.5, 1.5, static_cast<double>(NAN)}) EXPECT_THROW(validate_exponent(p), DomainError) << p;
    EXPECT_NO_THROW(validate_exponent(1.0));
    EXPECT_NO_THROW(validate_exponent(0.25));
    const Grid g(8);
    EXPECT_THROW(forward_map(presets::constant_sigma(g, 1.0), presets::linear_x(g), 2.0), DomainError);
}

TEST(ForwardMap, ConstantConductivityGivesConstantData) {
    const Grid g(32);
    for (double c : {0.5, 2.0}) {
        const ScalarField f = forward_map(presets::constant_sigma(g, c), presets::linear_x(g), 0.7);
        EXPECT_LT(oracle::max_diff(f, ScalarField(g, c)), 1e-8);
    }
}

TEST(ForwardMap, MatchesDenseOracle) {
    const Grid g(16);
    const Conductivity sigma = presets::bump_sigma(g, 0.4, 0.45, 0.55, 0.04);
    const ScalarField f = presets::affine_x(g, 1.5, 0.2);
    for (double p : {0.5, 1.0}) {
        const ScalarField lib = forward_map(sigma, f, p);
        EXPECT_LT(oracle::max_diff(lib, oracle::dense_forward(sigma.field(), f, p)), 1e-8);
    }
}

TEST(ForwardMap, AgreesWithHarmonicFaceStencilToSecondOrder) {
    // The dense oracle is O(n^6); two levels suffice for the ratio.
    std::vector<double> d;
    for (int n : {16, 32}) {
        const Grid g(n);
        const Conductivity sigma = presets::bump_sigma(g, 1.0, 0.5, 0.5, 0.05);
        const ScalarField f = presets::linear_x(g);
        d.push_back(l2_norm(forward_map(sigma, f, 0.5) -
                            oracle::dense_forward(sigma.field(), f, 0.5, oracle::Faces::harmonic)));
    }
    EXPECT_GT(d[0] / d[1], 3.0);
}

TEST(GradientFloor, NamesTheWorstNode) {
    const Grid g(16);
    const Conductivity sigma = presets::bump_sigma(g);
    const ScalarField f = presets::linear_x(g);
    const ScalarField speed = magnitude(gradient(solve_potential(sigma, f)));
    try {
        LinearizationBundle b(sigma, f, 1.0, {10.0, {}});
        FAIL() << "expected GradientFloorViolated";
    } catch (const GradientFloorViolated& e) {
        EXPECT_EQ(e.floor(), 10.0);
        EXPECT_DOUBLE_EQ(e.value(), speed.min());
        EXPECT_DOUBLE_EQ(speed(e.i(), e.j()), speed.min());
    }
    // A constant boundary gives u = const, |grad u| = 0.
    EXPECT_THROW(forward_map(presets::constant_sigma(g, 1.0), ScalarField(g, 1.0), 1.0),
                 GradientFloorViolated);
}

TEST(Differential, MatchesCentralDifferenceOfF) {
    const Grid g(32);
    const Conductivity s0 = presets::bump_sigma(g);
    const ScalarField f = presets::linear_x(g);
    const ScalarField h = presets::random_bump(g, 21);
    const double eps = 1e-4;
    for (double p : {0.5, 1.0}) {
        const LinearizationBundle b(s0, f, p, tight());
        const ScalarField fd = (1.0 / (2 * eps)) *
                               (forward_map(Conductivity(s0.field() + eps * h), f, p, tight()) -
                                forward_map(Conductivity(s0.field() - eps * h), f, p, tight()));
        EXPECT_LT(rel(differential(b, h), fd), 1e-6) << "p = " << p;
    }
}

TEST(Differential, LinearInH) {
    const Grid g(32);
    const LinearizationBundle b(presets::expx_sigma(g), presets::linear_x(g), 0.5);
    const ScalarField h1 = presets::random_bump(g, 1);
    const ScalarField h2 = presets::random_sine_series(g, 5, 2);
    // Power-of-two scaling passes through every step without rounding.
    EXPECT_EQ(oracle::max_diff(differential(b, 2.0 * h1), 2.0 * differential(b, h1)), 0.0);
    EXPECT_LT(rel(differential(b, h1 + h2), differential(b, h1) + differential(b, h2)), 1e-9);
}

TEST(Differential, ConstantPerturbationOfUnitConductivity) {
    const Grid g(32);
    const LinearizationBundle b(presets::constant_sigma(g, 1.0), presets::linear_x(g), 0.5);
    EXPECT_LT(oracle::max_diff(differential(b, ScalarField(g, 0.3)), ScalarField(g, 0.3)), 1e-10);
    const TaylorRemainder t = taylor_remainder(presets::constant_sigma(g, 1.0),
                                               presets::constant_sigma(g, 1.3), presets::linear_x(g), 0.5);
    EXPECT_LT(t.remainder.max_abs(), 1e-9);
}

TEST(SecondDifferential, MatchesSecondDifferenceOfF) {
    const Grid g(32);
    const Conductivity s0 = presets::bump_sigma(g);
    const ScalarField f = presets::linear_x(g);
    const ScalarField h = presets::random_bump(g, 22);
    const double eps = 1e-3;
    for (double p : {0.5, 1.0}) {
        const LinearizationBundle b(s0, f, p, tight());
        const ScalarField fd = (1.0 / (eps * eps)) *
                               (forward_map(Conductivity(s0.field() + eps * h), f, p, tight()) -
                                2.0 * b.forward_value() +
                                forward_map(Conductivity(s0.field() - eps * h), f, p, tight()));
        EXPECT_LT(rel(second_differential(b, h), fd), 1e-4) << "p = " << p;
        EXPECT_EQ(oracle::max_diff(second_differential(s0, f, p, h, tight()), second_differential(b, h)), 0.0);
    }
}

TEST(Taylor, RemainderIsSecondOrder) {
    const Grid g(32);
    const Conductivity s0 = presets::bump_sigma(g);
    const ScalarField f = presets::linear_x(g);
    const ScalarField h = presets::random_bump(g, 5);
    std::vector<double> eps{1e-1, 3e-2, 1e-2}, r;
    for (double e : eps) {
        const TaylorRemainder t = taylor_remainder(s0, Conductivity(s0.field() + e * h), f, 1.0);
        r.push_back(l2_norm(t.remainder));
        EXPECT_GT(t.bound_ratio, 0.0);
        EXPECT_TRUE(std::isfinite(t.bound_ratio));
    }
    EXPECT_NEAR(oracle::loglog_slope(eps, r), 2.0, 0.1);
    EXPECT_EQ(taylor_remainder(s0, s0, f, 1.0).bound_ratio, 0.0);
}

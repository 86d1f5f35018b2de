#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hip/errors.hpp"
#include "hip/mesh.hpp"
#include "oracles.hpp"

using namespace hip;

namespace {

constexpr double pi = std::numbers::pi;

ScalarField random_field(const Grid& g, unsigned seed, bool zero_ring) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ScalarField f(g);
    for (int j = 0; j <= g.n(); ++j) {
        for (int i = 0; i <= g.n(); ++i) {
            if (!(zero_ring && g.on_boundary(i, j))) f(i, j) = u(rng);
        }
    }
    return f;
}

}  // namespace

TEST(Grid, RejectsSmallOrInexactSpacing) {
    EXPECT_THROW(Grid(7), DomainError);
    EXPECT_NO_THROW(Grid(8));
    // 1/49 * 49 rounds to 0.9999999999999999.
    ASSERT_NE((1.0 / 49) * 49, 1.0);
    EXPECT_THROW(Grid(49), DomainError);
}

TEST(Grid, IndexingAndWeights) {
    const Grid g(16);
    EXPECT_EQ(g.size(), 17u * 17u);
    EXPECT_EQ(g.interior_size(), 15u * 15u);
    EXPECT_EQ(g.index(3, 2), 2u * 17u + 3u);
    EXPECT_EQ(g.interior_index(1, 1), 0u);
    EXPECT_EQ(g.interior_index(15, 15), 15u * 15u - 1u);
    double area = 0.0;
    for (int j = 0; j <= 16; ++j) {
        for (int i = 0; i <= 16; ++i) area += g.weight(i, j);
    }
    EXPECT_DOUBLE_EQ(area, 1.0);
}

TEST(ScalarField, ValidatesConstruction) {
    const Grid g(8);
    EXPECT_THROW(ScalarField(g, std::vector<double>(10, 0.0)), DomainError);
    std::vector<double> v(g.size(), 1.0);
    v[5] = NAN;
    EXPECT_THROW(ScalarField(g, v), DomainError);
    EXPECT_THROW(ScalarField(g) + ScalarField(Grid(16)), GridMismatch);
}

TEST(ScalarField, InteriorRoundTrip) {
    const Grid g(12);
    const ScalarField f = random_field(g, 3, true);
    const std::vector<double> in = f.interior();
    EXPECT_EQ(in.size(), g.interior_size());
    EXPECT_EQ(oracle::max_diff(ScalarField::from_interior(g, in), f), 0.0);
}

TEST(Calculus, GradientExactOnLinearFields) {
    const Grid g(16);
    const ScalarField f = ScalarField::from_function(g, [](double x, double y) { return 2 * x - 3 * y + 1; });
    for (Closure c : {Closure::summation_by_parts, Closure::second_order}) {
        const VectorField gr = gradient(f, c);
        EXPECT_LT(oracle::max_diff(gr.x(), ScalarField(g, 2.0)), 1e-12);
        EXPECT_LT(oracle::max_diff(gr.y(), ScalarField(g, -3.0)), 1e-12);
    }
}

TEST(Calculus, SecondOrderClosureExactOnQuadratics) {
    const Grid g(16);
    const ScalarField f = ScalarField::from_function(g, [](double x, double) { return x * x; });
    const ScalarField exact = ScalarField::from_function(g, [](double x, double) { return 2 * x; });
    EXPECT_LT(oracle::max_diff(diff_x(f, Closure::second_order), exact), 1e-12);
    // The summation-by-parts closure is first order on the ring: error h at x = 0.
    EXPECT_NEAR(diff_x(f)(0, 4), g.h(), 1e-14);
}

TEST(Calculus, DivergenceIsNegativeAdjointOfGradient) {
    const Grid g(20);
    const ScalarField f = random_field(g, 11, true);
    const VectorField v(random_field(g, 12, false), random_field(g, 13, false));
    const double lhs = l2_inner(gradient(f), v);
    const double rhs = -l2_inner(f, divergence(v));
    EXPECT_NEAR(lhs, rhs, 1e-13 * (std::abs(lhs) + 1.0));
}

TEST(Norms, TrapezoidalValues) {
    const Grid g(32);
    EXPECT_DOUBLE_EQ(l2_norm(ScalarField(g, 1.0)), 1.0);
    const ScalarField s = ScalarField::from_function(
        g, [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); });
    EXPECT_NEAR(l2_norm(s), 0.5, 1e-14);  // trapezoid is exact for sin^2
    // Trapezoid on x^2 gives 1/3 + h^2/6; the gradient part is exactly 1.
    const ScalarField x = ScalarField::from_function(g, [](double x, double) { return x; });
    const double h = g.h();
    EXPECT_NEAR(h1_norm(x), std::sqrt(1.0 / 3.0 + h * h / 6.0 + 1.0), 1e-13);
}

TEST(Sine, MatchesDirectSumAndInverts) {
    const Grid g(16);
    const ScalarField f = random_field(g, 5, true);
    const std::vector<double> fast = sine_coefficients(f);
    const std::vector<double> slow = oracle::direct_sine_coefficients(f);
    ASSERT_EQ(fast.size(), slow.size());
    for (std::size_t k = 0; k < fast.size(); ++k) EXPECT_NEAR(fast[k], slow[k], 1e-13);
    EXPECT_LT(oracle::max_diff(from_sine_coefficients(g, fast), f), 1e-13);
}

TEST(Sine, SingleModeCoefficient) {
    const Grid g(16);
    const ScalarField f = ScalarField::from_function(
        g, [](double x, double y) { return std::sin(2 * pi * x) * std::sin(3 * pi * y); });
    const std::vector<double> c = sine_coefficients(f);
    for (std::size_t k = 0; k < c.size(); ++k) {
        const double expect = (k == 2u * 15u + 1u) ? 0.5 : 0.0;  // (k,l) = (2,3)
        EXPECT_NEAR(c[k], expect, 1e-13);
    }
}

TEST(Sobolev, SingleModeAndParseval) {
    const Grid g(16);
    // sin(k pi) is only ~1e-16, so the ring is cleared explicitly.
    const ScalarField f = ScalarField::from_interior(
        g, ScalarField::from_function(g, [](double x, double y) {
               return std::sin(2 * pi * x) * std::sin(3 * pi * y);
           }).interior());
    for (double s : {0.0, 1.0, 2.5, 6.0}) {
        const double expect = 0.5 * std::pow(1.0 + pi * pi * 13.0, s / 2.0);
        EXPECT_NEAR(sobolev_norm(f, s), expect, 1e-11 * expect);
    }
    const ScalarField r = random_field(g, 8, true);
    EXPECT_NEAR(sobolev_norm(r, 0.0), l2_norm(r), 1e-13);
    EXPECT_THROW(sobolev_norm(f, -1.0), DomainError);
    EXPECT_THROW(sobolev_norm(ScalarField(g, 1.0), 1.0), DomainError);
}

TEST(C2Norm, ExactOnQuadratic) {
    const Grid g(16);
    const ScalarField f = ScalarField::from_function(g, [](double x, double) { return x * x; });
    // sup|f| + sup|f'| + sup|f''| = 1 + 2 + 2.
    EXPECT_NEAR(c2_norm(f), 5.0, 1e-9);
    const ScalarField xy = ScalarField::from_function(g, [](double x, double y) { return x * y; });
    EXPECT_NEAR(c2_norm(xy), 1.0 + 1.0 + 1.0, 1e-9);
}

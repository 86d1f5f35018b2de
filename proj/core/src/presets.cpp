#include "hip/presets.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "hip/errors.hpp"

namespace hip::presets {

ScalarField gaussian(const Grid& grid, double a, double x0, double y0, double r) {
    if (!(r > 0.0)) throw DomainError("gaussian width must be positive");
    return ScalarField::from_function(grid, [=](double x, double y) {
        return a * std::exp(-((x - x0) * (x - x0) + (y - y0) * (y - y0)) / r);
    });
}

Conductivity constant_sigma(const Grid& grid, double c) { return Conductivity(ScalarField(grid, c)); }

Conductivity bump_sigma(const Grid& grid, double a, double x0, double y0, double r) {
    ScalarField s = gaussian(grid, a, x0, y0, r);
    for (double& v : s.values()) v += 1.0;
    return Conductivity(std::move(s));
}

Conductivity expx_sigma(const Grid& grid) {
    return Conductivity(ScalarField::from_function(grid, [](double x, double) { return std::exp(x); }));
}

ScalarField linear_x(const Grid& grid) {
    return ScalarField::from_function(grid, [](double x, double) { return x; });
}

ScalarField affine_x(const Grid& grid, double a, double b) {
    return ScalarField::from_function(grid, [=](double x, double) { return a * x + b; });
}

double expx_potential(double x) { return (1.0 - std::exp(-x)) / (1.0 - std::exp(-1.0)); }

ScalarField random_sine_series(const Grid& grid, int band, std::uint64_t seed) {
    if (band < 1) throw DomainError("band limit must be at least 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> c(static_cast<std::size_t>(band) * band);
    double total = 0.0;
    for (double& v : c) {
        v = normal(rng);
        total += std::abs(v);
    }
    if (total == 0.0) c[0] = 1.0;
    const double pi = std::numbers::pi;
    ScalarField out(grid);
    for (int j = 1; j < grid.n(); ++j) {
        for (int i = 1; i < grid.n(); ++i) {
            const double x = grid.coord(i);
            const double y = grid.coord(j);
            double s = 0.0;
            for (int l = 1; l <= band; ++l) {
                const double sy = std::sin(l * pi * y);
                for (int k = 1; k <= band; ++k) {
                    s += c[static_cast<std::size_t>(l - 1) * band + (k - 1)] /
                         static_cast<double>(k * k + l * l) * std::sin(k * pi * x) * sy;
                }
            }
            out(i, j) = s;
        }
    }
    return out;
}

ScalarField random_bump(const Grid& grid, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(0.5, 1.0);
    std::uniform_real_distribution<double> centre(0.3, 0.7);
    std::uniform_real_distribution<double> width(0.02, 0.08);
    const double a = amp(rng);
    const double x0 = centre(rng);
    const double y0 = centre(rng);
    const double r = width(rng);
    const double pi = std::numbers::pi;
    ScalarField out = ScalarField::from_function(grid, [=](double x, double y) {
        return a * std::exp(-((x - x0) * (x - x0) + (y - y0) * (y - y0)) / r) * std::sin(pi * x) *
               std::sin(pi * y);
    });
    // sin(pi*1) is not exactly zero in floating point.
    for (int k = 0; k <= grid.n(); ++k) {
        out(k, 0) = out(k, grid.n()) = out(0, k) = out(grid.n(), k) = 0.0;
    }
    return out;
}

}  // namespace hip::presets

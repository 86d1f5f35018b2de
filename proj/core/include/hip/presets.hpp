#pragma once

// Named conductivities, boundary data and smooth test fields.

#include <cstdint>

#include "hip/elliptic.hpp"
#include "hip/mesh.hpp"

namespace hip::presets {

/// a * exp(-((x-x0)^2 + (y-y0)^2) / r)
ScalarField gaussian(const Grid& grid, double a, double x0, double y0, double r);

Conductivity constant_sigma(const Grid& grid, double c);
/// 1 + a * exp(-((x-x0)^2 + (y-y0)^2) / r)
Conductivity bump_sigma(const Grid& grid, double a = 0.2, double x0 = 0.5, double y0 = 0.5,
                        double r = 0.05);
/// e^x
Conductivity expx_sigma(const Grid& grid);

/// f = x on the whole grid (only the boundary ring is read by solvers).
ScalarField linear_x(const Grid& grid);
/// f = a x + b
ScalarField affine_x(const Grid& grid, double a, double b);

/// Exact potential for sigma = e^x with f = (1 - e^{-x}) / (1 - e^{-1}).
double expx_potential(double x);

/// Random band-limited sine series sum_{k,l<=band} c_kl sin(k pi x) sin(l pi y)
/// with c_kl ~ N(0,1) / (k^2 + l^2). Zero on the boundary ring, never identically zero.
ScalarField random_sine_series(const Grid& grid, int band, std::uint64_t seed);

/// Random Gaussian bump a exp(-|x-c|^2/r) multiplied by sin(pi x) sin(pi y)
/// so it vanishes on the boundary; a in [0.5,1], c in [0.3,0.7]^2, r in [0.02,0.08].
ScalarField random_bump(const Grid& grid, std::uint64_t seed);

}  // namespace hip::presets

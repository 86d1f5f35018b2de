#pragma once

// Reference implementations used only by the tests. Each one is written
// independently of the library code it checks: dense matrices instead of
// sparse ones, direct sums instead of separable transforms, finite
// differences of F instead of the linearization.

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "hip/mesh.hpp"

namespace hip::oracle {

enum class Faces { arithmetic, harmonic };

/// Solves div(sigma grad u) = rhs with u = boundary on the ring using the
/// conservative five-point stencil, assembled as a dense (n+1)^2 system with
/// identity rows on the ring and solved by LU. Harmonic face averages give an
/// alternative consistent stencil.
ScalarField dense_dirichlet(const ScalarField& sigma, const ScalarField& boundary,
                            const ScalarField& rhs, Faces faces = Faces::arithmetic);

/// F(sigma) from dense_dirichlet and central differences in the interior,
/// one-sided (f1 - f0)/h on the ring.
ScalarField dense_forward(const ScalarField& sigma, const ScalarField& boundary, double p,
                          Faces faces = Faces::arithmetic);

/// Sine coefficients by the direct O(n^4) double sum.
std::vector<double> direct_sine_coefficients(const ScalarField& f);

/// Dense matrix of a linear map on zero-boundary fields (interior unknowns),
/// built column by column from unit fields.
Eigen::MatrixXd dense_operator(const Grid& grid,
                               const std::function<ScalarField(const ScalarField&)>& op);

/// Smallest singular value of T0 = grad u0 . grad (summation-by-parts closure
/// on the ring) on zero-boundary fields, in trapezoidal norms, by dense SVD.
double dense_transport_sigma_min(const ScalarField& u0);

/// max_k |a_k - b_k|.
double max_diff(const ScalarField& a, const ScalarField& b);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace hip::oracle

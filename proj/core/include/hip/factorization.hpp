#pragma once

// The transport operator T0 = grad u0 . grad, the projections onto and
// against grad u0, the second-order operator L, and the spectral checks on
// the factorization  sigma0 T0 (dF(rho sigma0) / (sigma0 |grad u0|^p))
//                  = -L Delta_{sigma0,D}^{-1} (sigma0 T0 rho).

#include "hip/elliptic.hpp"
#include "hip/forward.hpp"
#include "hip/linalg.hpp"
#include "hip/mesh.hpp"

namespace hip {

/// grad u0 . grad rho at each node.
ScalarField transport_apply(const ScalarField& u0, const ScalarField& rho);

/// Pi_0 v = (grad u0 . v / |grad u0|^2) grad u0.
VectorField project_parallel(const ScalarField& u0, const VectorField& v,
                             double grad_floor = default_grad_floor);
/// Pi_perp v = v - Pi_0 v.
VectorField project_perp(const ScalarField& u0, const VectorField& v,
                         double grad_floor = default_grad_floor);

/// L v = -div(sigma0 (I - p ghat ghat^T) grad v), ghat = grad u0 / |grad u0|,
/// assembled from its bilinear form with corner quadrature: every cell's
/// energy is the mean over its four corners of g^T K g, with K taken at the
/// corner node and g built from the two cell edges meeting there.
class ProjectedGradientOperator {
public:
    const Grid& grid() const noexcept { return grid_; }
    double p() const noexcept { return p_; }
    /// Symmetric matrix over interior unknowns, scaled so it approximates L itself.
    const linalg::SparseMatrix& matrix() const noexcept { return matrix_; }

    /// L v at interior nodes for v vanishing on the ring; zero on the ring.
    ScalarField apply(const ScalarField& v) const;
    /// <L v, v> in the trapezoidal inner product.
    double quadratic_form(const ScalarField& v) const;

    struct Split {
        double perp;      ///< ||sqrt(sigma0) Pi_perp grad v||^2
        double parallel;  ///< ||sqrt(sigma0) Pi_0 grad v||^2
    };
    /// The two terms of the bilinear form under the same corner quadrature,
    /// so quadratic_form(v) == perp + (1 - p) parallel.
    Split split(const ScalarField& v) const;

private:
    friend ProjectedGradientOperator assemble_L(const Conductivity&, const ScalarField&, double,
                                                double);
    ProjectedGradientOperator(const Grid& grid, double p, ScalarField sigma, VectorField unit,
                              linalg::SparseMatrix matrix);

    Grid grid_;
    double p_;
    ScalarField sigma_;
    VectorField unit_;  // grad u0 / |grad u0|
    linalg::SparseMatrix matrix_;
};

/// Throws GradientFloorViolated if |grad u0| < grad_floor somewhere.
ProjectedGradientOperator assemble_L(const Conductivity& sigma0, const ScalarField& u0, double p,
                                     double grad_floor = default_grad_floor);

struct FactorizationSides {
    ScalarField lhs;  ///< sigma0 T0 (dF(rho sigma0) / (sigma0 |grad u0|^p))
    ScalarField rhs;  ///< -L Delta^{-1}(sigma0 T0 rho)
};

/// Both sides of the factorization identity; rho may have any boundary values.
FactorizationSides factorization_sides(const LinearizationBundle& bundle, const ScalarField& rho);

/// ||lhs - rhs|| / ||lhs|| over nodes 2 <= i,j <= n-2 (0 if both vanish).
/// Throws DomainError unless rho vanishes on the boundary ring.
double factorization_residual(const LinearizationBundle& bundle, const ScalarField& rho);
double factorization_residual(const Conductivity& sigma0, const ScalarField& boundary, double p,
                              const ScalarField& rho, const ForwardOptions& options = {});

/// Smallest eigenvalue of the discrete L (p < 1: its smallest singular value;
/// p = 1: the minimum Rayleigh quotient (Lv,v)/||v||^2).
double l_spectral_bound(const ProjectedGradientOperator& op, const linalg::EigenOptions& opts = {});
double l_spectral_bound(const Conductivity& sigma0, const ScalarField& u0, double p,
                        const linalg::EigenOptions& opts = {});

/// Smallest singular value of T0 on zero-boundary fields, measured in the
/// trapezoidal norm over all nodes. Its reciprocal bounds ||h|| / ||T0 h||.
double transport_spectral_bound(const ScalarField& u0, double grad_floor = default_grad_floor,
                                const linalg::EigenOptions& opts = {});

struct HarmonicConjugate {
    ScalarField conjugate;  ///< integrated first along y = 0, then vertically
    double path_residual;   ///< max difference against the transposed path
};

/// Stream function with grad u~ = (sigma0 grad u0)^perp, (a,b)^perp = (b,-a), u~(0,0) = 0.
/// Throws DomainError when the two integration paths disagree by more than tol.
HarmonicConjugate harmonic_conjugate(const Conductivity& sigma0, const ScalarField& u0,
                                     double tol = 1e-2);

/// c = 1 / |grad u0|.
ScalarField wave_speed(const ScalarField& u0, double grad_floor = default_grad_floor);

}  // namespace hip

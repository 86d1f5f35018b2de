#pragma once

// The forward map F(sigma) = sigma |grad u|^p, its first and second
// differentials, and the second-order Taylor remainder.

#include "hip/elliptic.hpp"
#include "hip/mesh.hpp"

namespace hip {

inline constexpr double default_grad_floor = 1e-3;

struct ForwardOptions {
    double grad_floor = default_grad_floor;
    SolverOptions solver{};
};

/// Throws DomainError unless 0 < p <= 1 (p > 1 makes the linearization hyperbolic).
void validate_exponent(double p);

/// Throws GradientFloorViolated at the node where |grad| is smallest if it is below floor.
void check_gradient_floor(const VectorField& grad, double floor);

/// Everything the linearization at sigma0 needs, computed once.
class LinearizationBundle {
public:
    /// Solves for u0 and checks the gradient floor.
    LinearizationBundle(Conductivity sigma0, ScalarField boundary, double p,
                        const ForwardOptions& options = {});

    const Grid& grid() const noexcept { return sigma0_.grid(); }
    const Conductivity& sigma0() const noexcept { return sigma0_; }
    const ScalarField& boundary() const noexcept { return boundary_; }
    const DirichletSystem& system() const noexcept { return system_; }
    const ScalarField& u0() const noexcept { return u0_; }
    const VectorField& grad_u0() const noexcept { return grad_u0_; }
    /// |grad u0| at each node.
    const ScalarField& grad_norm() const noexcept { return grad_norm_; }
    /// |grad u0|^p at each node.
    const ScalarField& speed_pow() const noexcept { return speed_pow_; }
    double p() const noexcept { return p_; }
    double grad_floor() const noexcept { return options_.grad_floor; }
    const ForwardOptions& options() const noexcept { return options_; }

    /// F(sigma0).
    ScalarField forward_value() const;

private:
    Conductivity sigma0_;
    ScalarField boundary_;
    double p_;
    ForwardOptions options_;
    DirichletSystem system_;
    ScalarField u0_;
    VectorField grad_u0_;
    ScalarField grad_norm_;
    ScalarField speed_pow_;
};

/// sigma-harmonic potential with boundary values taken from `boundary`'s ring.
ScalarField solve_potential(const Conductivity& sigma, const ScalarField& boundary,
                            const SolverOptions& options = {});

/// F(sigma) = sigma |grad u|^p.
ScalarField forward_map(const Conductivity& sigma, const ScalarField& boundary, double p,
                        const ForwardOptions& options = {});

/// v with div(sigma0 grad v) = -div(h grad u0), v = 0 on the ring.
ScalarField solve_v(const LinearizationBundle& bundle, const ScalarField& h);

/// w with div(sigma0 grad w) = -2 div(h grad v), w = 0 on the ring.
ScalarField solve_w(const LinearizationBundle& bundle, const ScalarField& h, const ScalarField& v);

/// dF(h) = h |grad u0|^p + p |grad u0|^{p-2} sigma0 grad u0 . grad v(h).
ScalarField differential(const LinearizationBundle& bundle, const ScalarField& h);

/// Second differential d^2F(h,h) at the bundle's conductivity.
ScalarField second_differential(const LinearizationBundle& bundle, const ScalarField& h);
ScalarField second_differential(const Conductivity& sigma_t, const ScalarField& boundary, double p,
                                const ScalarField& h, const ForwardOptions& options = {});

struct TaylorRemainder {
    ScalarField remainder;  ///< F(sigma) - F(sigma0) - dF(sigma - sigma0)
    double bound_ratio;     ///< ||R|| / c2_norm(sigma - sigma0)^2, 0 when sigma == sigma0
};

TaylorRemainder taylor_remainder(const Conductivity& sigma0, const Conductivity& sigma,
                                 const ScalarField& boundary, double p,
                                 const ForwardOptions& options = {});

}  // namespace hip

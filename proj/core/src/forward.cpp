#include "hip/forward.hpp"

#include <cmath>
#include <string>

#include "hip/errors.hpp"

namespace hip {

void validate_exponent(double p) {
    if (!(p > 0.0 && p <= 1.0)) {
        throw DomainError("exponent p must lie in (0,1], got " + std::to_string(p) +
                          (p > 1.0 ? " (p > 1 gives a hyperbolic linearization)" : ""));
    }
}

void check_gradient_floor(const VectorField& grad, double floor) {
    const Grid& g = grad.grid();
    double worst = INFINITY;
    int wi = 0;
    int wj = 0;
    for (int j = 0; j <= g.n(); ++j) {
        for (int i = 0; i <= g.n(); ++i) {
            const double m = std::hypot(grad.x()(i, j), grad.y()(i, j));
            if (m < worst) {
                worst = m;
                wi = i;
                wj = j;
            }
        }
    }
    if (!(worst >= floor)) throw GradientFloorViolated(wi, wj, worst, floor);
}

ScalarField solve_potential(const Conductivity& sigma, const ScalarField& boundary,
                            const SolverOptions& options) {
    const DirichletSystem sys = assemble(sigma, options);
    return solve_dirichlet(sys, boundary, ScalarField(sigma.grid()));
}

LinearizationBundle::LinearizationBundle(Conductivity sigma0, ScalarField boundary, double p,
                                         const ForwardOptions& options)
    : sigma0_(std::move(sigma0)),
      boundary_(std::move(boundary)),
      p_(p),
      options_(options),
      system_(assemble(sigma0_, options.solver)),
      u0_(sigma0_.grid()),
      grad_u0_(sigma0_.grid()),
      grad_norm_(sigma0_.grid()),
      speed_pow_(sigma0_.grid()) {
    validate_exponent(p_);
    if (!(boundary_.grid() == sigma0_.grid())) throw GridMismatch();
    u0_ = solve_dirichlet(system_, boundary_, ScalarField(grid()));
    grad_u0_ = gradient(u0_);
    check_gradient_floor(grad_u0_, options_.grad_floor);
    grad_norm_ = magnitude(grad_u0_);
    for (std::size_t k = 0; k < speed_pow_.size(); ++k) {
        speed_pow_[k] = std::pow(grad_norm_[k], p_);
    }
}

ScalarField LinearizationBundle::forward_value() const { return hadamard(sigma0_.field(), speed_pow_); }

ScalarField forward_map(const Conductivity& sigma, const ScalarField& boundary, double p,
                        const ForwardOptions& options) {
    validate_exponent(p);
    const ScalarField u = solve_potential(sigma, boundary, options.solver);
    const VectorField g = gradient(u);
    check_gradient_floor(g, options.grad_floor);
    ScalarField out(sigma.grid());
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = sigma.field()[k] * std::pow(std::hypot(g.x()[k], g.y()[k]), p);
    }
    return out;
}

ScalarField solve_v(const LinearizationBundle& bundle, const ScalarField& h) {
    if (!(h.grid() == bundle.grid())) throw GridMismatch();
    return solve_zero_bc(bundle.system(), -1.0 * flux_divergence(h, bundle.u0()));
}

ScalarField solve_w(const LinearizationBundle& bundle, const ScalarField& h, const ScalarField& v) {
    if (!(h.grid() == bundle.grid()) || !(v.grid() == bundle.grid())) throw GridMismatch();
    return solve_zero_bc(bundle.system(), -2.0 * flux_divergence(h, v));
}

ScalarField differential(const LinearizationBundle& bundle, const ScalarField& h) {
    const ScalarField v = solve_v(bundle, h);
    const VectorField gv = gradient(v);
    const VectorField& gu = bundle.grad_u0();
    const double p = bundle.p();
    ScalarField out(bundle.grid());
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double norm = bundle.grad_norm()[k];
        const double transport = gu.x()[k] * gv.x()[k] + gu.y()[k] * gv.y()[k];
        out[k] = h[k] * bundle.speed_pow()[k] +
                 p * std::pow(norm, p - 2.0) * bundle.sigma0().field()[k] * transport;
    }
    return out;
}

ScalarField second_differential(const LinearizationBundle& bundle, const ScalarField& h) {
    const ScalarField v = solve_v(bundle, h);
    const ScalarField w = solve_w(bundle, h, v);
    const VectorField gv = gradient(v);
    const VectorField gw = gradient(w);
    const VectorField& gu = bundle.grad_u0();
    const double p = bundle.p();
    ScalarField out(bundle.grid());
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double norm = bundle.grad_norm()[k];
        const double sigma = bundle.sigma0().field()[k];
        const double uv = gu.x()[k] * gv.x()[k] + gu.y()[k] * gv.y()[k];
        const double vv = gv.x()[k] * gv.x()[k] + gv.y()[k] * gv.y()[k];
        const double uw = gu.x()[k] * gw.x()[k] + gu.y()[k] * gw.y()[k];
        const double pm2 = std::pow(norm, p - 2.0);
        out[k] = 2.0 * h[k] * p * pm2 * uv + sigma * p * pm2 * (vv + uw) +
                 sigma * p * (p - 2.0) * std::pow(norm, p - 4.0) * uv * uv;
    }
    return out;
}

ScalarField second_differential(const Conductivity& sigma_t, const ScalarField& boundary, double p,
                                const ScalarField& h, const ForwardOptions& options) {
    const LinearizationBundle bundle(sigma_t, boundary, p, options);
    return second_differential(bundle, h);
}

TaylorRemainder taylor_remainder(const Conductivity& sigma0, const Conductivity& sigma,
                                 const ScalarField& boundary, double p,
                                 const ForwardOptions& options) {
    const LinearizationBundle bundle(sigma0, boundary, p, options);
    const ScalarField h = sigma.field() - sigma0.field();
    ScalarField r = forward_map(sigma, boundary, p, options) - bundle.forward_value();
    r -= differential(bundle, h);
    const double c2 = c2_norm(h);
    const double ratio = c2 > 0.0 ? l2_norm(r) / (c2 * c2) : 0.0;
    return TaylorRemainder{std::move(r), ratio};
}

}  // namespace hip

#pragma once

// Sparse linear algebra shared by the elliptic, factorization and inversion
// modules: a preconditioned conjugate-gradient loop and inverse iteration.

#include <Eigen/Sparse>
#include <memory>

namespace hip::linalg {

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

struct CgOptions {
    double rel_tol = 1e-10;
    int max_iter = 1000;
};

struct CgReport {
    int iterations = 0;
    double rel_residual = 0.0;
    bool converged = false;
};

/// Incomplete-Cholesky preconditioner; immutable after construction and safe
/// to apply from several threads.
class IcPreconditioner {
public:
    explicit IcPreconditioner(const SparseMatrix& a);
    Vector apply(const Vector& r) const;

private:
    using Factor = Eigen::IncompleteCholesky<double, Eigen::Lower, Eigen::NaturalOrdering<int>>;
    std::shared_ptr<const Factor> ic_;
};

struct IdentityPreconditioner {
    Vector apply(const Vector& r) const { return r; }
};

/// Preconditioned conjugate gradients for an SPD operator. `apply(p)` returns
/// A p; `observe(k, x, r)` sees the iterate and residual after step k.
/// Starts from the incoming x. Deterministic; never throws on non-convergence.
template <class Apply, class Precond, class Observe>
CgReport pcg(Apply&& apply, const Precond& precond, const Vector& b, Vector& x,
             const CgOptions& opts, Observe&& observe) {
    CgReport report;
    const double bnorm = b.norm();
    if (bnorm == 0.0) {
        x.setZero(b.size());
        report.converged = true;
        return report;
    }
    if (x.size() != b.size()) x.setZero(b.size());
    Vector r = b - apply(x);
    report.rel_residual = r.norm() / bnorm;
    if (report.rel_residual <= opts.rel_tol) {
        report.converged = true;
        return report;
    }
    Vector z = precond.apply(r);
    Vector p = z;
    double rz = r.dot(z);
    for (int k = 1; k <= opts.max_iter; ++k) {
        const Vector ap = apply(p);
        const double pap = p.dot(ap);
        if (!(pap > 0.0)) break;
        const double alpha = rz / pap;
        x += alpha * p;
        r -= alpha * ap;
        report.iterations = k;
        report.rel_residual = r.norm() / bnorm;
        observe(k, x, r);
        if (report.rel_residual <= opts.rel_tol) {
            report.converged = true;
            break;
        }
        z = precond.apply(r);
        const double rz_next = r.dot(z);
        p = z + (rz_next / rz) * p;
        rz = rz_next;
    }
    return report;
}

template <class Apply, class Precond>
CgReport pcg(Apply&& apply, const Precond& precond, const Vector& b, Vector& x,
             const CgOptions& opts) {
    return pcg(std::forward<Apply>(apply), precond, b, x, opts,
               [](int, const Vector&, const Vector&) {});
}

struct EigenOptions {
    double rel_tol = 1e-8;  ///< Ritz residual of A^{-1}, relative to its top Ritz value
    int max_iter = 400;     ///< Krylov dimension cap
};

struct EigenResult {
    double value = 0.0;
    Vector vector;
    int iterations = 0;
};

/// Smallest eigenpair of a sparse SPD matrix: Lanczos on A^{-1} (one sparse
/// LDL^T factorization) with full reorthogonalization, which keeps clustered
/// low spectra tractable. The reported value is the Rayleigh quotient of A at
/// the Ritz vector. Throws SolverError if A is not positive definite or the
/// Krylov dimension cap is reached first.
EigenResult smallest_eigenpair(const SparseMatrix& a, const EigenOptions& opts);

}  // namespace hip::linalg

#include "hip/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hip/errors.hpp"

namespace hip::linalg {

IcPreconditioner::IcPreconditioner(const SparseMatrix& a) {
    auto ic = std::make_shared<Factor>();
    ic->compute(a);
    if (ic->info() != Eigen::Success) {
        throw SolverError("incomplete Cholesky factorization failed");
    }
    ic_ = std::move(ic);
}

Vector IcPreconditioner::apply(const Vector& r) const { return ic_->solve(r); }

EigenResult smallest_eigenpair(const SparseMatrix& a, const EigenOptions& opts) {
    const Eigen::Index m = a.rows();
    const Eigen::SimplicialLDLT<SparseMatrix> ldlt(a);
    if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().minCoeff() > 0.0)) {
        throw SolverError("smallest_eigenpair: matrix is not positive definite");
    }

    // Smooth, sign-definite start so the lowest mode is never orthogonal to it.
    Vector q(m);
    for (Eigen::Index k = 0; k < m; ++k) q[k] = 1.0 + 0.25 * std::sin(0.7 * static_cast<double>(k));
    q.normalize();

    const int cap = static_cast<int>(std::min<Eigen::Index>(opts.max_iter, m));
    Eigen::MatrixXd basis(m, cap);
    std::vector<double> alpha;
    std::vector<double> beta;
    for (int k = 0; k < cap; ++k) {
        basis.col(k) = q;
        Vector w = ldlt.solve(q);
        alpha.push_back(q.dot(w));
        // Two passes of classical Gram-Schmidt against the whole basis.
        for (int pass = 0; pass < 2; ++pass) {
            w -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).transpose() * w);
        }
        const double b = w.norm();

        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k + 1, k + 1);
        for (int r = 0; r <= k; ++r) {
            t(r, r) = alpha[static_cast<std::size_t>(r)];
            if (r < k) t(r, r + 1) = t(r + 1, r) = beta[static_cast<std::size_t>(r)];
        }
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(t);
        const double theta = ritz.eigenvalues()(k);  // largest eigenvalue of A^{-1}
        const bool invariant = b <= 1e-14 * std::abs(theta);
        // ||A^{-1} y - theta y|| = b |last entry of the Ritz vector|.
        const bool settled = b * std::abs(ritz.eigenvectors()(k, k)) <= opts.rel_tol * theta;
        if (settled || invariant || k + 1 == m) {
            Vector y = basis.leftCols(k + 1) * ritz.eigenvectors().col(k);
            y.normalize();
            EigenResult result;
            result.value = (a * y).dot(y);
            result.vector = std::move(y);
            result.iterations = k + 1;
            return result;
        }
        beta.push_back(b);
        q = w / b;
    }
    throw SolverError("smallest_eigenpair: Lanczos did not converge in " + std::to_string(cap) + " steps");
}

}  // namespace hip::linalg

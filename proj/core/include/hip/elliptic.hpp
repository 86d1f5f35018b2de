#pragma once

// Dirichlet problems for Delta_sigma = div(sigma grad .) on the unit square.

#include <vector>

#include "hip/linalg.hpp"
#include "hip/mesh.hpp"

namespace hip {

/// Positive nodal conductivity with a certified lower bound.
class Conductivity {
public:
    /// Lower bound taken as the nodal minimum. Throws DomainError if it is not > 0.
    explicit Conductivity(ScalarField field);
    /// Throws DomainError unless 0 < sigma_min <= every nodal value.
    Conductivity(ScalarField field, double sigma_min);

    const Grid& grid() const noexcept { return field_.grid(); }
    const ScalarField& field() const noexcept { return field_; }
    double sigma_min() const noexcept { return sigma_min_; }

private:
    ScalarField field_;
    double sigma_min_;
};

struct SolverOptions {
    double rel_tol = 1e-10;
    int max_iter_factor = 20;  ///< iteration cap is max_iter_factor * n
};

/// Five-point flux discretization of -Delta_sigma on the interior nodes,
/// with arithmetic interface conductivities. Immutable once assembled.
class DirichletSystem {
public:
    const Grid& grid() const noexcept { return grid_; }
    const SolverOptions& options() const noexcept { return options_; }
    /// SPD matrix over interior unknowns (interior_index order).
    const linalg::SparseMatrix& matrix() const noexcept { return matrix_; }
    const linalg::IcPreconditioner& preconditioner() const noexcept { return precond_; }

    /// sigma at the half node between (i,j) and (i+1,j).
    double interface_x(int i, int j) const noexcept;
    /// sigma at the half node between (i,j) and (i,j+1).
    double interface_y(int i, int j) const noexcept;

    /// Contribution of boundary values to the interior equations.
    std::vector<double> boundary_lift(const ScalarField& boundary) const;

    /// Delta_sigma u at interior nodes (using u's boundary ring), zero on the ring.
    ScalarField apply(const ScalarField& u) const;

private:
    friend DirichletSystem assemble(const Conductivity& sigma, const SolverOptions& options);
    DirichletSystem(const Grid& grid, SolverOptions options, std::vector<double> ix,
                    std::vector<double> iy, linalg::SparseMatrix matrix);

    Grid grid_;
    SolverOptions options_;
    std::vector<double> ix_;  // n x (n+1), index j*n + i
    std::vector<double> iy_;  // (n+1) x n, index j*(n+1) + i
    linalg::SparseMatrix matrix_;
    linalg::IcPreconditioner precond_;
};

DirichletSystem assemble(const Conductivity& sigma, const SolverOptions& options = {});

/// Solves Delta_sigma u = rhs in the interior with u = boundary on the ring.
/// Throws SolverError if PCG misses the tolerance within the iteration cap.
ScalarField solve_dirichlet(const DirichletSystem& sys, const ScalarField& boundary,
                            const ScalarField& rhs);

/// solve_dirichlet with homogeneous boundary data.
ScalarField solve_zero_bc(const DirichletSystem& sys, const ScalarField& rhs);

/// div(coef grad u) at interior nodes with the same compact stencil and
/// arithmetic interface averaging as assemble; zero on the boundary ring.
ScalarField flux_divergence(const ScalarField& coef, const ScalarField& u);

}  // namespace hip
